// Copyright 2026 The homsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Temporal wavepackets released from a cavity memory, their overlaps, and
// the storage-time purity model.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace homsync {

/// Uniform time grid t0, t0 + dt, ..., t1 in ns.
struct TimeGrid {
    double t0 = -100.0;
    double t1 = 1400.0;
    double dt = 2.0;

    int size() const;
    void validate() const;
};

/// Sampled wavepacket f(t), normalized so that sum f^2 dt = 1 (units ns^-1/2).
class ModeFunction {
   public:
    ModeFunction(double t0, double dt, std::vector<double> samples);

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    const std::vector<double>& samples() const { return samples_; }
    int size() const { return static_cast<int>(samples_.size()); }
    double time(int i) const { return t0_ + dt_ * i; }

    /// Linear interpolation, zero outside the grid.
    double at(double t) const;
    /// g(t) = f(t - delta) on the same grid; exact for multiples of dt.
    ModeFunction shifted(double delta_ns) const;
    /// Trapezoidal sum f^2 dt.
    double norm_squared() const;
    ModeFunction normalized() const;

   private:
    double t0_;
    double dt_;
    std::vector<double> samples_;
};

/// Memory release and decay parameters.
struct MemoryModel {
    /// Single-photon purity right after heralding.
    double initial_purity = 0.602;
    double lifetime_ns = 2300.0;
    double release_delay_ns = 50.0;
    double gamma_rise = 0.012117;  // ns^-1
    double gamma_fall = 0.012117;  // ns^-1

    void validate() const;
};

/// f(t; tau) = N (1 - e^{-g_r s}) e^{-g_f s}, s = t - tau - delay >= 0.
/// Throws NumericalError when the grid holds less than 1 - 1e-6 of the norm.
ModeFunction mode_function(const MemoryModel& model, double tau_ns, const TimeGrid& grid = {});

/// |sum f g dt|^2 on the common grid (trapezoidal rule).
double overlap(const ModeFunction& f, const ModeFunction& g);

/// Normalized (f1 + f2).
ModeFunction signal_mode(const ModeFunction& f1, const ModeFunction& f2);

/// Full width at half maximum of f^2, with linear interpolation at the edges.
double intensity_fwhm(const ModeFunction& f);

/// Memory-2 model whose fall rate is scaled so that overlap(f1(.;0), f2(.;0))
/// equals `target_overlap`; found by bisection on the scale factor.
MemoryModel calibrate_fall_rate_for_overlap(const MemoryModel& reference, double target_overlap,
                                            const TimeGrid& grid = {});

struct PcaResult {
    ModeFunction mode;
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXd eigenvectors;  // columns, unit Euclidean norm, same order
};

/// Leading temporal mode of a batch of traces (rows = traces, columns = time
/// bins). Eigen-decomposes the sample second-moment matrix <x(t_i) x(t_j)>.
PcaResult pca_estimate(const Eigen::MatrixXd& traces, double t0, double dt);

enum class TraceContent { kVacuum, kSinglePhoton };

/// Whitened homodyne traces: each time bin carries a dimensionless integrated
/// quadrature (vacuum variance 1/2). The mode amplitude q enters along
/// e = f sqrt(dt), and vacuum noise fills the orthogonal complement of e.
Eigen::MatrixXd synthesize_traces(const ModeFunction& mode, int n_traces, TraceContent content,
                                  std::uint64_t seed);

/// P(tau) = P0 exp(-tau / lifetime).
double purity_vs_storage(const MemoryModel& model, double tau_ns);

struct CoherenceOptions {
    double threshold = 0.5;
    TimeGrid grid{-600.0, 1000.0, 1.0};
    int mismatch_samples = 201;
    double search_max_ns = 2000.0;
};

/// Average single-photon purity in the mean-timing signal mode when the
/// herald mismatch is uniform in [-tau_coh, tau_coh].
double average_mismatch_purity(const MemoryModel& m1, const MemoryModel& m2, double tau_coh_ns,
                               const CoherenceOptions& opts = {});

/// tau_coh at which average_mismatch_purity crosses the threshold.
double coherence_time(const MemoryModel& m1, const MemoryModel& m2, const CoherenceOptions& opts = {});

}  // namespace homsync

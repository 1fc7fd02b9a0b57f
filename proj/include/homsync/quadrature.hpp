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

// Quadrature wave functions and homodyne statistics.
//
// Convention: hbar = 1, x = (a + a^dagger)/sqrt(2), so the vacuum has
// quadrature variance 1/2. Measuring a mode at phase theta means measuring x
// on exp(i theta n) rho exp(-i theta n); shifting both phases by phi is the
// same as applying phase_shift_apply(phi) to both modes first.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "homsync/fock.hpp"
#include "homsync/rng.hpp"

namespace homsync {

/// Normalized Hermite function psi_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2/2).
double fock_wavefunction(int n, double x);
/// Same, but rejects n above the cutoff.
double fock_wavefunction(int n, double x, FockCutoff cutoff);
/// psi_0(x) ... psi_{n_max}(x).
Eigen::VectorXd fock_wavefunctions(int n_max, double x);

double joint_density(const TwoModeState& state, double theta1_deg, double theta2_deg, double x1, double x2);
double marginal_density(const TwoModeState& state, Mode mode, double theta_deg, double x);
double single_mode_density(const SingleModeState& state, double theta_deg, double x);

struct PhaseGrid {
    std::vector<double> phases_deg{0.0, 30.0, 60.0, 90.0, 120.0, 150.0};

    /// Strictly increasing, within [0, 180).
    void validate() const;
    std::size_t pair_count() const { return phases_deg.size() * phases_deg.size(); }
    std::pair<double, double> pair(std::size_t index) const {
        return {phases_deg[index / phases_deg.size()], phases_deg[index % phases_deg.size()]};
    }
};

struct QuadratureRecord {
    double theta1_deg = 0.0;
    double theta2_deg = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double tau1_ns = 0.0;
    double tau2_ns = 0.0;

    friend bool operator==(const QuadratureRecord&, const QuadratureRecord&) = default;
};

/// Uniform lattice lo, lo + step, ..., hi.
struct QuadratureLattice {
    double lo = -6.0;
    double hi = 6.0;
    double step = 0.01;

    int size() const;
    double at(int i) const { return lo + step * i; }
    void validate() const;
};

enum class PhaseSchedule { kRandom, kSequential };

struct SamplerOptions {
    QuadratureLattice lattice;
    PhaseSchedule schedule = PhaseSchedule::kRandom;
    double normalization_tolerance = 1e-3;
    /// Mixed into the per-event generator so different datasets drawn with the
    /// same seed stay independent.
    std::uint64_t stream = 0;
};

/// Inverse-CDF sampler for one state over all phase pairs of a grid. x1 comes
/// from the mode-1 marginal, x2 from the exact conditional at that x1; both
/// CDFs are piecewise linear on the lattice.
class QuadratureSampler {
   public:
    QuadratureSampler(const TwoModeState& state, const PhaseGrid& grid, const QuadratureLattice& lattice = {},
                      double normalization_tolerance = 1e-3);

    /// Quadrature pair for the given phase-pair index.
    std::pair<double, double> draw(CounterRng& rng, std::size_t pair_index) const;
    const PhaseGrid& grid() const { return grid_; }

   private:
    double invert(const std::vector<double>& cdf, double u) const;

    FockCutoff cutoff_;
    PhaseGrid grid_;
    QuadratureLattice lattice_;
    Eigen::MatrixXd psi_table_;                 // lattice points x number states
    std::vector<CMatrix> rotated_;              // per phase pair
    std::vector<std::vector<double>> marginal_cdf_;  // per first-mode phase
};

/// Phase pair for event `index` under the given schedule.
std::size_t schedule_pair(PhaseSchedule schedule, CounterRng& rng, std::size_t index, std::size_t n_events,
                          std::size_t pair_count);

/// Synthetic homodyne dataset; deterministic given seed and options.
std::vector<QuadratureRecord> sample_records(const TwoModeState& state, const PhaseGrid& grid,
                                             std::size_t n_events, std::uint64_t seed,
                                             const SamplerOptions& options = {});

}  // namespace homsync

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

// Iterative maximum-likelihood reconstruction of density matrices from
// phase-tagged homodyne data.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homsync/fock.hpp"
#include "homsync/quadrature.hpp"

namespace homsync {

/// One histogram cell: phase pair, lattice indices (center = (i + 1/2) * width)
/// and occupancy.
struct Bin {
    double theta1_deg = 0.0;
    double theta2_deg = 0.0;
    int i1 = 0;
    int i2 = 0;
    std::int64_t count = 0;
};

struct BinnedData {
    double width = 0.1;
    std::vector<Bin> bins;
    std::int64_t total = 0;

    double center(int i) const { return (i + 0.5) * width; }
};

BinnedData bin_records(const std::vector<QuadratureRecord>& records, double width);

/// One record per counted event, placed at its bin center.
std::vector<QuadratureRecord> expand_bins(const BinnedData& data);

/// Multinomial resample of the counts (equivalent to resampling records).
BinnedData resample_bins(const BinnedData& data, std::uint64_t seed);

struct MleOptions {
    int max_iterations = 2000;
    /// Stop once the per-event log-likelihood gains less than this.
    double tolerance = 1e-9;
    double bin_width = 0.1;
    /// Fraction of the R operator mixed with the identity; 1 is the plain
    /// R rho R iteration.
    double dilution = 1.0;

    void validate() const;
};

struct MleResult {
    TwoModeState state;
    int iterations = 0;
    bool converged = false;
    double log_likelihood_per_event = 0.0;
    /// Per-event log-likelihood after each iteration (entry 0 is the start).
    std::vector<double> log_likelihood_trace;
    /// Steps where the dilution had to be reduced to keep the likelihood rising.
    int dilution_backoffs = 0;
    std::vector<std::string> warnings;
};

/// Histogram weights on the lattice, as frequencies or raw counts.
struct WeightedBin {
    double theta1_deg = 0.0;
    double theta2_deg = 0.0;
    int i1 = 0;
    int i2 = 0;
    double weight = 0.0;
};

/// Two-mode likelihood over a set of bins. Bins are grouped by phase pair and
/// laid on a dense lattice per pair so that all bin probabilities follow from
/// two small matrix products.
class LikelihoodModel {
   public:
    LikelihoodModel(const BinnedData& data, FockCutoff cutoff);
    LikelihoodModel(double width, const std::vector<WeightedBin>& bins, FockCutoff cutoff);

    /// sum_j w_j ln p_j with p_j = width^2 * joint density at the bin center.
    double log_likelihood(const CMatrix& rho) const;
    /// R = sum_j (f_j / p_j) Pi_j with f_j = w_j / total weight.
    CMatrix r_operator(const CMatrix& rho) const;
    /// Normalized R_l rho R_l with R_l = (1 - l) I + l R.
    CMatrix step(const CMatrix& rho, double dilution) const;
    /// Bin probabilities p_j, in the order the bins were given.
    std::vector<double> probabilities(const CMatrix& rho) const;

    double total_weight() const { return total_weight_; }
    const FockCutoff& cutoff() const { return cutoff_; }
    int phases_mode1() const { return phases1_; }
    int phases_mode2() const { return phases2_; }

   private:
    struct Setting {
        double theta1_rad;
        double theta2_rad;
        Eigen::MatrixXd weights;  // lattice mode 1 x lattice mode 2
        CVector phase;            // exp(i (n1 theta1 + n2 theta2))
    };

    void build(double width, const std::vector<WeightedBin>& bins);
    Eigen::MatrixXd density_grid(const Setting& s, const CMatrix& rho) const;

    FockCutoff cutoff_;
    double width_ = 0.1;
    double total_weight_ = 0.0;
    int lo1_ = 0, lo2_ = 0;
    int phases1_ = 0, phases2_ = 0;
    Eigen::MatrixXd q1_, q2_;  // (d^2) x lattice: psi_m(x) psi_n(x)
    std::vector<Setting> settings_;
    std::vector<std::pair<int, std::pair<int, int>>> order_;  // (setting, lattice cell) per input bin
};

MleResult mle_reconstruct(const BinnedData& data, FockCutoff cutoff, const MleOptions& opts = {},
                          const std::optional<TwoModeState>& initial = std::nullopt);
MleResult mle_reconstruct(const LikelihoodModel& model, const MleOptions& opts = {},
                          const std::optional<TwoModeState>& initial = std::nullopt);

double log_likelihood(const TwoModeState& state, const BinnedData& data);

// Single-mode path: reconstruct one input mode from its own quadratures.

struct SingleModeBin {
    double theta_deg = 0.0;
    int i = 0;
    std::int64_t count = 0;
};

struct SingleModeBinnedData {
    double width = 0.1;
    std::vector<SingleModeBin> bins;
    std::int64_t total = 0;
};

SingleModeBinnedData bin_single_mode(const std::vector<QuadratureRecord>& records, Mode mode, double width);

struct SingleModeMleResult {
    SingleModeState state;
    int iterations = 0;
    bool converged = false;
    double log_likelihood_per_event = 0.0;
};

SingleModeMleResult mle_reconstruct_single(const SingleModeBinnedData& data, FockCutoff cutoff,
                                           const MleOptions& opts = {});

}  // namespace homsync

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

// Figures of merit of two-mode density matrices.

#include <cstdint>
#include <optional>

#include "homsync/fock.hpp"
#include "homsync/tomography.hpp"

namespace homsync {

/// log2 of the trace norm of the partial transpose on `transposed`.
double log_negativity(const TwoModeState& state, Mode transposed = Mode::kFirst);

struct FilterResult {
    TwoModeState state;
    /// Trace surviving the projection, before renormalization.
    double success_probability = 0.0;
};

/// Projects each mode onto span{|0>, |2>} and renormalizes. Throws
/// NumericalError when less than 1e-9 of the trace survives.
FilterResult local_filter(const TwoModeState& state);

/// P_s rho_s + (1 - P_s) rho_perp: the filtered block kept with its weight
/// and the complement replaced by its number-diagonal (separable) part.
TwoModeState filtered_output_state(const TwoModeState& state);

/// <|n1 - n2|> / <n1 + n2>.
double visibility(const TwoModeState& state);

/// <n1 n2> / (<n1> <n2>).
double cross_correlation(const TwoModeState& state);

/// <1| Tr_other(B^dagger rho B) |1> for the balanced beam splitter.
double input_purity_from_output(const TwoModeState& state, Mode mode);

struct MetricsValues {
    double log_negativity = 0.0;
    /// Log-negativity of filtered_output_state.
    double filtered_log_negativity = 0.0;
    /// Log-negativity of the renormalized filtered block alone.
    double postselected_log_negativity = 0.0;
    double filter_fraction = 0.0;
    double visibility = 0.0;
    double cross_correlation = 0.0;
    double input_purity1 = 0.0;
    double input_purity2 = 0.0;
};

struct MetricsReport {
    MetricsValues values;
    /// Bootstrap standard deviations of each value.
    std::optional<MetricsValues> errors;
    int bootstrap_resamples = 0;
};

MetricsValues compute_metrics(const TwoModeState& state);

struct BootstrapOptions {
    int resamples = 200;
    std::uint64_t seed = 1;
    MleOptions mle;
};

/// Metrics of `estimate` with standard deviations over MLE reconstructions
/// of multinomially resampled data, each warm-started from `estimate`.
MetricsReport bootstrap_metrics(const BinnedData& data, const TwoModeState& estimate,
                                const BootstrapOptions& opts = {});

}  // namespace homsync

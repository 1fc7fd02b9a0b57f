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

#include "homsync/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "homsync/error.hpp"
#include "homsync/rng.hpp"

namespace homsync {
namespace {

CMatrix partial_transpose(const TwoModeState& state, Mode mode) {
    const auto& c = state.cutoff();
    const int d = c.dim();
    CMatrix out(c.two_mode_dim(), c.two_mode_dim());
    for (int m1 = 0; m1 < d; ++m1) {
        for (int m2 = 0; m2 < d; ++m2) {
            for (int n1 = 0; n1 < d; ++n1) {
                for (int n2 = 0; n2 < d; ++n2) {
                    out(c.index(m1, m2), c.index(n1, n2)) =
                        mode == Mode::kFirst ? state.element(n1, m2, m1, n2) : state.element(m1, n2, n1, m2);
                }
            }
        }
    }
    return out;
}

struct Moments {
    double n1 = 0.0, n2 = 0.0, n1n2 = 0.0, abs_diff = 0.0;
};

Moments number_moments(const TwoModeState& state) {
    Moments m;
    const int d = state.cutoff().dim();
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const double p = state.population(a, b);
            m.n1 += p * a;
            m.n2 += p * b;
            m.n1n2 += p * a * b;
            m.abs_diff += p * std::abs(a - b);
        }
    }
    return m;
}

}  // namespace

double log_negativity(const TwoModeState& state, Mode transposed) {
    const CMatrix pt = partial_transpose(state, transposed);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(pt, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition of the partial transpose failed");
    const double value = std::log2(solver.eigenvalues().cwiseAbs().sum());
    return value < 0.0 && value > -1e-12 ? 0.0 : value;
}

FilterResult local_filter(const TwoModeState& state) {
    const auto& c = state.cutoff();
    const int d = c.dim();
    auto kept = [](int n) { return n == 0 || n == 2; };
    CMatrix rho = CMatrix::Zero(c.two_mode_dim(), c.two_mode_dim());
    for (int m1 = 0; m1 < d; ++m1) {
        for (int m2 = 0; m2 < d; ++m2) {
            if (!kept(m1) || !kept(m2)) continue;
            for (int n1 = 0; n1 < d; ++n1) {
                for (int n2 = 0; n2 < d; ++n2) {
                    if (kept(n1) && kept(n2)) rho(c.index(m1, m2), c.index(n1, n2)) = state.element(m1, m2, n1, n2);
                }
            }
        }
    }
    const double ps = rho.trace().real();
    if (!(ps >= 1e-9)) throw NumericalError("local filter removes the whole state");
    return {TwoModeState(c, rho / ps), ps};
}

TwoModeState filtered_output_state(const TwoModeState& state) {
    const FilterResult filtered = local_filter(state);
    const auto& c = state.cutoff();
    CMatrix rho = filtered.state.rho() * filtered.success_probability;
    for (int n1 = 0; n1 < c.dim(); ++n1) {
        for (int n2 = 0; n2 < c.dim(); ++n2) {
            const bool kept = (n1 == 0 || n1 == 2) && (n2 == 0 || n2 == 2);
            if (!kept) rho(c.index(n1, n2), c.index(n1, n2)) = state.population(n1, n2);
        }
    }
    return TwoModeState(c, rho);
}

double visibility(const TwoModeState& state) {
    const Moments m = number_moments(state);
    if (!(m.n1 + m.n2 > 0.0)) throw NumericalError("visibility needs a nonzero photon number");
    return m.abs_diff / (m.n1 + m.n2);
}

double cross_correlation(const TwoModeState& state) {
    const Moments m = number_moments(state);
    if (!(m.n1 > 0.0) || !(m.n2 > 0.0)) throw NumericalError("cross-correlation needs photons in both modes");
    return m.n1n2 / (m.n1 * m.n2);
}

double input_purity_from_output(const TwoModeState& state, Mode mode) {
    // Inputs may hold up to 2 n_max photons in one mode, so undo the beam
    // splitter in a space large enough to keep every component.
    const FockCutoff& small = state.cutoff();
    const FockCutoff big(2 * small.n_max());
    CMatrix rho = CMatrix::Zero(big.two_mode_dim(), big.two_mode_dim());
    for (int m1 = 0; m1 < small.dim(); ++m1) {
        for (int m2 = 0; m2 < small.dim(); ++m2) {
            for (int n1 = 0; n1 < small.dim(); ++n1) {
                for (int n2 = 0; n2 < small.dim(); ++n2) {
                    rho(big.index(m1, m2), big.index(n1, n2)) = state.element(m1, m2, n1, n2);
                }
            }
        }
    }
    return partial_trace(beam_splitter_inverse_apply(TwoModeState(big, std::move(rho)), 0.5), mode).population(1);
}

MetricsValues compute_metrics(const TwoModeState& state) {
    MetricsValues v;
    v.log_negativity = log_negativity(state);
    const FilterResult filtered = local_filter(state);
    v.filtered_log_negativity = log_negativity(filtered_output_state(state));
    v.postselected_log_negativity = log_negativity(filtered.state);
    v.filter_fraction = filtered.success_probability;
    v.visibility = visibility(state);
    v.cross_correlation = cross_correlation(state);
    v.input_purity1 = input_purity_from_output(state, Mode::kFirst);
    v.input_purity2 = input_purity_from_output(state, Mode::kSecond);
    return v;
}

MetricsReport bootstrap_metrics(const BinnedData& data, const TwoModeState& estimate, const BootstrapOptions& opts) {
    if (opts.resamples < 2) throw ConfigError("bootstrap needs at least two resamples");
    MetricsReport report;
    report.values = compute_metrics(estimate);
    report.bootstrap_resamples = opts.resamples;

    auto fields = [](MetricsValues& v) {
        return std::array<double*, 8>{&v.log_negativity,    &v.filtered_log_negativity, &v.postselected_log_negativity,
                                      &v.filter_fraction,   &v.visibility,              &v.cross_correlation,
                                      &v.input_purity1,     &v.input_purity2};
    };
    MetricsValues sum, sum_sq;
    for (int i = 0; i < opts.resamples; ++i) {
        const BinnedData resampled = resample_bins(data, derive_seed(opts.seed, "bootstrap-" + std::to_string(i)));
        const MleResult fit = mle_reconstruct(resampled, estimate.cutoff(), opts.mle, estimate);
        MetricsValues v = compute_metrics(fit.state);
        auto f = fields(v), s = fields(sum), q = fields(sum_sq);
        for (size_t k = 0; k < f.size(); ++k) {
            *s[k] += *f[k];
            *q[k] += *f[k] * *f[k];
        }
    }
    MetricsValues err;
    const double n = opts.resamples;
    auto e = fields(err), s = fields(sum), q = fields(sum_sq);
    for (size_t k = 0; k < e.size(); ++k) {
        const double mean = *s[k] / n;
        *e[k] = std::sqrt(std::max(0.0, (*q[k] - n * mean * mean) / (n - 1.0)));
    }
    report.errors = err;
    return report;
}

}  // namespace homsync

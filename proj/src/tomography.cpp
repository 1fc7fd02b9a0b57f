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

#include "homsync/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "homsync/error.hpp"
#include "homsync/rng.hpp"

namespace homsync {
namespace {

constexpr double kDegree = std::numbers::pi / 180.0;
// Allowed per-event likelihood decrease from rounding.
constexpr double kMonotoneSlack = 1e-12;
constexpr int kMaxBackoffs = 40;

int lattice_index(double x, double width) { return static_cast<int>(std::floor(x / width)); }

// Rows (m * d + n) hold psi_m(x) psi_n(x) for the lattice centers lo..lo+count-1.
Eigen::MatrixXd product_table(int n_max, double width, int lo, int count) {
    const int d = n_max + 1;
    Eigen::MatrixXd q(d * d, count);
    for (int j = 0; j < count; ++j) {
        const Eigen::VectorXd psi = fock_wavefunctions(n_max, (lo + j + 0.5) * width);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) q(m * d + n, j) = psi(m) * psi(n);
    }
    return q;
}

CMatrix normalized(const CMatrix& m) {
    CMatrix h = 0.5 * (m + m.adjoint());
    return h / h.trace().real();
}

void check_probability(double p, const char* what) {
    if (!(p > 0.0)) {
        throw NumericalError(std::string(what) +
                             ": occupied bin has zero model probability; the cutoff is probably too small");
    }
}

}  // namespace

BinnedData bin_records(const std::vector<QuadratureRecord>& records, double width) {
    if (!(width > 0.0)) throw ConfigError("bin width must be positive");
    if (records.empty()) throw ConfigError("cannot bin an empty record set");
    std::map<std::tuple<double, double, int, int>, std::int64_t> counts;
    for (const auto& r : records) {
        ++counts[{r.theta1_deg, r.theta2_deg, lattice_index(r.x1, width), lattice_index(r.x2, width)}];
    }
    BinnedData out;
    out.width = width;
    out.bins.reserve(counts.size());
    for (const auto& [key, n] : counts) {
        const auto& [t1, t2, i1, i2] = key;
        out.bins.push_back({t1, t2, i1, i2, n});
        out.total += n;
    }
    return out;
}

std::vector<QuadratureRecord> expand_bins(const BinnedData& data) {
    std::vector<QuadratureRecord> out;
    out.reserve(static_cast<size_t>(data.total));
    for (const auto& b : data.bins) {
        for (std::int64_t k = 0; k < b.count; ++k) {
            out.push_back({b.theta1_deg, b.theta2_deg, data.center(b.i1), data.center(b.i2), 0.0, 0.0});
        }
    }
    return out;
}

BinnedData resample_bins(const BinnedData& data, std::uint64_t seed) {
    std::vector<double> w;
    w.reserve(data.bins.size());
    for (const auto& b : data.bins) w.push_back(static_cast<double>(b.count));
    std::discrete_distribution<size_t> pick(w.begin(), w.end());
    CounterRng rng(seed, 0x626f6f74ULL, 0);
    BinnedData out = data;
    for (auto& b : out.bins) b.count = 0;
    for (std::int64_t k = 0; k < data.total; ++k) ++out.bins[pick(rng)].count;
    std::erase_if(out.bins, [](const Bin& b) { return b.count == 0; });
    return out;
}

void MleOptions::validate() const {
    if (max_iterations <= 0) throw ConfigError("max_iterations must be positive");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
    if (!(dilution > 0.0 && dilution <= 1.0)) throw ConfigError("dilution must lie in (0, 1]");
}

// ---------------------------------------------------------------------------
// LikelihoodModel

LikelihoodModel::LikelihoodModel(const BinnedData& data, FockCutoff cutoff) : cutoff_(cutoff) {
    std::vector<WeightedBin> bins;
    bins.reserve(data.bins.size());
    for (const auto& b : data.bins) {
        bins.push_back({b.theta1_deg, b.theta2_deg, b.i1, b.i2, static_cast<double>(b.count)});
    }
    build(data.width, bins);
}

LikelihoodModel::LikelihoodModel(double width, const std::vector<WeightedBin>& bins, FockCutoff cutoff)
    : cutoff_(cutoff) {
    build(width, bins);
}

void LikelihoodModel::build(double width, const std::vector<WeightedBin>& bins) {
    if (!(width > 0.0)) throw ConfigError("bin width must be positive");
    if (bins.empty()) throw ConfigError("no bins to reconstruct from");
    width_ = width;
    int lo1 = bins.front().i1, hi1 = lo1, lo2 = bins.front().i2, hi2 = lo2;
    std::map<std::pair<double, double>, int> index;
    std::set<double> p1, p2;
    for (const auto& b : bins) {
        if (b.weight < 0.0) throw ConfigError("bin weights must be non-negative");
        lo1 = std::min(lo1, b.i1);
        hi1 = std::max(hi1, b.i1);
        lo2 = std::min(lo2, b.i2);
        hi2 = std::max(hi2, b.i2);
        index.emplace(std::make_pair(b.theta1_deg, b.theta2_deg), 0);
        p1.insert(b.theta1_deg);
        p2.insert(b.theta2_deg);
    }
    lo1_ = lo1;
    lo2_ = lo2;
    phases1_ = static_cast<int>(p1.size());
    phases2_ = static_cast<int>(p2.size());
    const int n1 = hi1 - lo1 + 1;
    const int n2 = hi2 - lo2 + 1;
    q1_ = product_table(cutoff_.n_max(), width, lo1, n1);
    q2_ = product_table(cutoff_.n_max(), width, lo2, n2);

    const FockCutoff& c = cutoff_;
    for (auto& [phases, idx] : index) {
        idx = static_cast<int>(settings_.size());
        Setting s{phases.first * kDegree, phases.second * kDegree, Eigen::MatrixXd::Zero(n1, n2),
                  CVector(c.two_mode_dim())};
        for (int a = 0; a < c.dim(); ++a)
            for (int b = 0; b < c.dim(); ++b)
                s.phase(c.index(a, b)) = std::exp(Complex(0.0, s.theta1_rad * a + s.theta2_rad * b));
        settings_.push_back(std::move(s));
    }
    total_weight_ = 0.0;
    order_.reserve(bins.size());
    for (const auto& b : bins) {
        const int s = index.at({b.theta1_deg, b.theta2_deg});
        settings_[s].weights(b.i1 - lo1, b.i2 - lo2) += b.weight;
        total_weight_ += b.weight;
        order_.push_back({s, {b.i1 - lo1, b.i2 - lo2}});
    }
    if (!(total_weight_ > 0.0)) throw ConfigError("bins carry no weight");
}

Eigen::MatrixXd LikelihoodModel::density_grid(const Setting& s, const CMatrix& rho) const {
    const int d = cutoff_.dim();
    // A[(m1 n1), (m2 n2)] = Re rho_s[(m1 m2), (n1 n2)]
    Eigen::MatrixXd a(d * d, d * d);
    for (int m1 = 0; m1 < d; ++m1)
        for (int m2 = 0; m2 < d; ++m2)
            for (int n1 = 0; n1 < d; ++n1)
                for (int n2 = 0; n2 < d; ++n2) {
                    const int row = cutoff_.index(m1, m2);
                    const int col = cutoff_.index(n1, n2);
                    a(m1 * d + n1, m2 * d + n2) =
                        (s.phase(row) * rho(row, col) * std::conj(s.phase(col))).real();
                }
    return q1_.transpose() * a * q2_;
}

double LikelihoodModel::log_likelihood(const CMatrix& rho) const {
    const double cell = width_ * width_;
    double acc = 0.0;
    for (const auto& s : settings_) {
        const Eigen::MatrixXd dens = density_grid(s, rho);
        for (Eigen::Index j = 0; j < dens.cols(); ++j)
            for (Eigen::Index i = 0; i < dens.rows(); ++i) {
                const double w = s.weights(i, j);
                if (w == 0.0) continue;
                const double p = cell * dens(i, j);
                check_probability(p, "log_likelihood");
                acc += w * std::log(p);
            }
    }
    return acc;
}

std::vector<double> LikelihoodModel::probabilities(const CMatrix& rho) const {
    std::vector<Eigen::MatrixXd> grids;
    grids.reserve(settings_.size());
    for (const auto& s : settings_) grids.push_back(density_grid(s, rho));
    std::vector<double> out;
    out.reserve(order_.size());
    for (const auto& [s, cell] : order_) out.push_back(width_ * width_ * grids[s](cell.first, cell.second));
    return out;
}

CMatrix LikelihoodModel::r_operator(const CMatrix& rho) const {
    const FockCutoff& c = cutoff_;
    const int d = c.dim();
    const double cell = width_ * width_;
    CMatrix r = CMatrix::Zero(c.two_mode_dim(), c.two_mode_dim());
    for (const auto& s : settings_) {
        const Eigen::MatrixXd dens = density_grid(s, rho);
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dens.rows(), dens.cols());
        for (Eigen::Index j = 0; j < dens.cols(); ++j)
            for (Eigen::Index i = 0; i < dens.rows(); ++i) {
                const double w = s.weights(i, j);
                if (w == 0.0) continue;
                check_probability(cell * dens(i, j), "r_operator");
                // f_j / p_j times the bin projector's cell factor
                g(i, j) = w / dens(i, j);
            }
        const Eigen::MatrixXd k = q1_ * g * q2_.transpose();
        for (int m1 = 0; m1 < d; ++m1)
            for (int m2 = 0; m2 < d; ++m2)
                for (int n1 = 0; n1 < d; ++n1)
                    for (int n2 = 0; n2 < d; ++n2) {
                        const int row = c.index(m1, m2);
                        const int col = c.index(n1, n2);
                        r(row, col) += std::conj(s.phase(row)) * k(m1 * d + n1, m2 * d + n2) * s.phase(col);
                    }
    }
    return r / total_weight_;
}

CMatrix LikelihoodModel::step(const CMatrix& rho, double dilution) const {
    const CMatrix r = r_operator(rho);
    const CMatrix mixed =
        (1.0 - dilution) * CMatrix::Identity(rho.rows(), rho.cols()) + dilution * r;
    return normalized(mixed * rho * mixed);
}

// ---------------------------------------------------------------------------

MleResult mle_reconstruct(const LikelihoodModel& model, const MleOptions& opts,
                          const std::optional<TwoModeState>& initial) {
    opts.validate();
    const FockCutoff& c = model.cutoff();
    std::vector<std::string> warnings;
    if (model.phases_mode1() < 2 || model.phases_mode2() < 2) {
        warnings.push_back("fewer than two distinct phases per mode; the state is not fully determined");
    }
    CMatrix rho = initial ? initial->rho()
                          : CMatrix(CMatrix::Identity(c.two_mode_dim(), c.two_mode_dim()) / c.two_mode_dim());
    const double total = model.total_weight();
    double ll = model.log_likelihood(rho) / total;

    MleResult result{TwoModeState(c, rho)};
    result.log_likelihood_trace.push_back(ll);
    for (int it = 1; it <= opts.max_iterations; ++it) {
        double dilution = opts.dilution;
        CMatrix candidate;
        double candidate_ll = 0.0;
        bool accepted = false;
        for (int backoff = 0; backoff <= kMaxBackoffs; ++backoff) {
            candidate = model.step(rho, dilution);
            candidate_ll = model.log_likelihood(candidate) / total;
            if (candidate_ll >= ll - kMonotoneSlack) {
                accepted = true;
                break;
            }
            ++result.dilution_backoffs;
            dilution *= 0.5;
        }
        result.iterations = it;
        if (!accepted) {
            // No diluted step improves the likelihood: stationary to precision.
            result.converged = true;
            break;
        }
        const double gain = candidate_ll - ll;
        rho = std::move(candidate);
        ll = candidate_ll;
        result.log_likelihood_trace.push_back(ll);
        if (gain < opts.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.state = TwoModeState(c, rho);
    result.log_likelihood_per_event = ll;
    result.warnings = std::move(warnings);
    if (!result.converged) {
        result.warnings.push_back("maximum-likelihood iteration stopped at max_iterations without converging");
    }
    return result;
}

MleResult mle_reconstruct(const BinnedData& data, FockCutoff cutoff, const MleOptions& opts,
                          const std::optional<TwoModeState>& initial) {
    return mle_reconstruct(LikelihoodModel(data, cutoff), opts, initial);
}

double log_likelihood(const TwoModeState& state, const BinnedData& data) {
    return LikelihoodModel(data, state.cutoff()).log_likelihood(state.rho());
}

// ---------------------------------------------------------------------------
// Single mode

SingleModeBinnedData bin_single_mode(const std::vector<QuadratureRecord>& records, Mode mode, double width) {
    if (!(width > 0.0)) throw ConfigError("bin width must be positive");
    if (records.empty()) throw ConfigError("cannot bin an empty record set");
    std::map<std::pair<double, int>, std::int64_t> counts;
    for (const auto& r : records) {
        const bool first = mode == Mode::kFirst;
        ++counts[{first ? r.theta1_deg : r.theta2_deg, lattice_index(first ? r.x1 : r.x2, width)}];
    }
    SingleModeBinnedData out;
    out.width = width;
    for (const auto& [key, n] : counts) {
        out.bins.push_back({key.first, key.second, n});
        out.total += n;
    }
    return out;
}

SingleModeMleResult mle_reconstruct_single(const SingleModeBinnedData& data, FockCutoff cutoff,
                                           const MleOptions& opts) {
    opts.validate();
    if (data.bins.empty()) throw ConfigError("no bins to reconstruct from");
    const int d = cutoff.dim();
    int lo = data.bins.front().i, hi = lo;
    std::map<double, int> index;
    for (const auto& b : data.bins) {
        lo = std::min(lo, b.i);
        hi = std::max(hi, b.i);
        index.emplace(b.theta_deg, 0);
    }
    const int n = hi - lo + 1;
    const Eigen::MatrixXd q = product_table(cutoff.n_max(), data.width, lo, n);
    std::vector<CVector> phases;
    for (auto& [theta, idx] : index) {
        idx = static_cast<int>(phases.size());
        CVector ph(d);
        for (int k = 0; k < d; ++k) ph(k) = std::exp(Complex(0.0, theta * kDegree * k));
        phases.push_back(ph);
    }
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(phases.size()));
    double total = 0.0;
    for (const auto& b : data.bins) {
        weights(b.i - lo, index.at(b.theta_deg)) += static_cast<double>(b.count);
        total += static_cast<double>(b.count);
    }

    auto densities = [&](const CMatrix& rho, size_t s) {
        Eigen::VectorXd a(d * d);
        for (int m = 0; m < d; ++m)
            for (int k = 0; k < d; ++k) a(m * d + k) = (phases[s](m) * rho(m, k) * std::conj(phases[s](k))).real();
        return Eigen::VectorXd(q.transpose() * a);
    };
    auto loglik = [&](const CMatrix& rho) {
        double acc = 0.0;
        for (size_t s = 0; s < phases.size(); ++s) {
            const Eigen::VectorXd dens = densities(rho, s);
            for (int i = 0; i < n; ++i) {
                const double w = weights(i, static_cast<Eigen::Index>(s));
                if (w == 0.0) continue;
                check_probability(dens(i), "log_likelihood");
                acc += w * std::log(data.width * dens(i));
            }
        }
        return acc / total;
    };
    auto step = [&](const CMatrix& rho, double dilution) {
        CMatrix r = CMatrix::Zero(d, d);
        for (size_t s = 0; s < phases.size(); ++s) {
            const Eigen::VectorXd dens = densities(rho, s);
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i) {
                const double w = weights(i, static_cast<Eigen::Index>(s));
                if (w != 0.0) g(i) = w / dens(i);
            }
            const Eigen::VectorXd k = q * g;
            for (int m = 0; m < d; ++m)
                for (int l = 0; l < d; ++l) r(m, l) += std::conj(phases[s](m)) * k(m * d + l) * phases[s](l);
        }
        r /= total;
        const CMatrix mixed = (1.0 - dilution) * CMatrix::Identity(d, d) + dilution * r;
        return normalized(mixed * rho * mixed);
    };

    CMatrix rho = CMatrix::Identity(d, d) / d;
    double ll = loglik(rho);
    SingleModeMleResult result{SingleModeState(cutoff, rho)};
    for (int it = 1; it <= opts.max_iterations; ++it) {
        double dilution = opts.dilution;
        bool accepted = false;
        CMatrix candidate;
        double candidate_ll = 0.0;
        for (int backoff = 0; backoff <= kMaxBackoffs; ++backoff) {
            candidate = step(rho, dilution);
            candidate_ll = loglik(candidate);
            if (candidate_ll >= ll - kMonotoneSlack) {
                accepted = true;
                break;
            }
            dilution *= 0.5;
        }
        result.iterations = it;
        if (!accepted) {
            result.converged = true;
            break;
        }
        const double gain = candidate_ll - ll;
        rho = std::move(candidate);
        ll = candidate_ll;
        if (gain < opts.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.state = SingleModeState(cutoff, rho);
    result.log_likelihood_per_event = ll;
    return result;
}

}  // namespace homsync

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

#include "homsync/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "homsync/error.hpp"

namespace homsync {
namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

// exp(i theta1 n1 + i theta2 n2) conjugation of the full two-mode matrix.
CMatrix rotate(const TwoModeState& state, double theta1_rad, double theta2_rad) {
    const FockCutoff& c = state.cutoff();
    CVector phase(c.two_mode_dim());
    for (int n1 = 0; n1 < c.dim(); ++n1)
        for (int n2 = 0; n2 < c.dim(); ++n2)
            phase(c.index(n1, n2)) = std::exp(Complex(0.0, theta1_rad * n1 + theta2_rad * n2));
    return phase.asDiagonal() * state.rho() * phase.conjugate().asDiagonal();
}

double quadratic_form(const Eigen::MatrixXd& re, const Eigen::VectorXd& psi) { return psi.dot(re * psi); }

}  // namespace

double fock_wavefunction(int n, double x) {
    if (n < 0) throw ConfigError("photon number must be non-negative");
    return fock_wavefunctions(n, x)(n);
}

double fock_wavefunction(int n, double x, FockCutoff cutoff) {
    if (n > cutoff.n_max()) {
        throw ConfigError("photon number " + std::to_string(n) + " above cutoff " + std::to_string(cutoff.n_max()));
    }
    return fock_wavefunction(n, x);
}

// psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}
Eigen::VectorXd fock_wavefunctions(int n_max, double x) {
    Eigen::VectorXd psi(n_max + 1);
    psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (n_max >= 1) psi(1) = std::sqrt(2.0) * x * psi(0);
    for (int n = 1; n < n_max; ++n) {
        psi(n + 1) = std::sqrt(2.0 / (n + 1)) * x * psi(n) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1);
    }
    return psi;
}

double joint_density(const TwoModeState& state, double theta1_deg, double theta2_deg, double x1, double x2) {
    const FockCutoff& c = state.cutoff();
    const CMatrix rho = rotate(state, theta1_deg * kDegree, theta2_deg * kDegree);
    const Eigen::VectorXd a = fock_wavefunctions(c.n_max(), x1);
    const Eigen::VectorXd b = fock_wavefunctions(c.n_max(), x2);
    Eigen::VectorXd v(c.two_mode_dim());
    for (int n1 = 0; n1 < c.dim(); ++n1)
        for (int n2 = 0; n2 < c.dim(); ++n2) v(c.index(n1, n2)) = a(n1) * b(n2);
    return std::max(0.0, quadratic_form(rho.real(), v));
}

double single_mode_density(const SingleModeState& state, double theta_deg, double x) {
    const SingleModeState rotated = phase_shift_apply(state, theta_deg * kDegree);
    const Eigen::VectorXd psi = fock_wavefunctions(state.cutoff().n_max(), x);
    return std::max(0.0, quadratic_form(rotated.rho().real(), psi));
}

double marginal_density(const TwoModeState& state, Mode mode, double theta_deg, double x) {
    return single_mode_density(partial_trace(state, mode), theta_deg, x);
}

void PhaseGrid::validate() const {
    if (phases_deg.empty()) throw ConfigError("phase grid is empty");
    for (size_t i = 0; i < phases_deg.size(); ++i) {
        const double p = phases_deg[i];
        if (!(p >= 0.0 && p < 180.0)) throw ConfigError("phase " + std::to_string(p) + " outside [0, 180)");
        if (i > 0 && !(p > phases_deg[i - 1])) throw ConfigError("phase grid must be strictly increasing");
    }
}

int QuadratureLattice::size() const { return static_cast<int>(std::lround((hi - lo) / step)) + 1; }

void QuadratureLattice::validate() const {
    if (!(step > 0.0) || !(hi > lo)) throw ConfigError("quadrature lattice needs lo < hi and step > 0");
}

QuadratureSampler::QuadratureSampler(const TwoModeState& state, const PhaseGrid& grid,
                                     const QuadratureLattice& lattice, double normalization_tolerance)
    : cutoff_(state.cutoff()), grid_(grid), lattice_(lattice) {
    grid_.validate();
    lattice_.validate();
    const int n = lattice_.size();
    psi_table_.resize(n, cutoff_.dim());
    for (int i = 0; i < n; ++i) psi_table_.row(i) = fock_wavefunctions(cutoff_.n_max(), lattice_.at(i)).transpose();

    rotated_.reserve(grid_.pair_count());
    for (size_t p = 0; p < grid_.pair_count(); ++p) {
        const auto [t1, t2] = grid_.pair(p);
        rotated_.push_back(rotate(state, t1 * kDegree, t2 * kDegree));
    }

    const SingleModeState reduced = partial_trace(state, Mode::kFirst);
    for (double theta : grid_.phases_deg) {
        const Eigen::MatrixXd re = phase_shift_apply(reduced, theta * kDegree).rho().real();
        const Eigen::VectorXd dens = ((psi_table_ * re).cwiseProduct(psi_table_)).rowwise().sum();
        std::vector<double> cdf(n, 0.0);
        for (int i = 1; i < n; ++i) {
            cdf[i] = cdf[i - 1] + 0.5 * lattice_.step * (std::max(0.0, dens(i - 1)) + std::max(0.0, dens(i)));
        }
        if (std::abs(cdf.back() - 1.0) > normalization_tolerance) {
            throw NumericalError("quadrature density integrates to " + std::to_string(cdf.back()) +
                                 " on the sampling lattice; widen the lattice or lower the cutoff");
        }
        marginal_cdf_.push_back(std::move(cdf));
    }
}

double QuadratureSampler::invert(const std::vector<double>& cdf, double u) const {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.begin()) return lattice_.lo;
    if (it == cdf.end()) return lattice_.hi;
    const auto i = static_cast<int>(it - cdf.begin());
    const double lo = cdf[i - 1];
    const double span = cdf[i] - lo;
    const double frac = span > 0.0 ? (target - lo) / span : 0.5;
    return lattice_.at(i - 1) + frac * lattice_.step;
}

std::pair<double, double> QuadratureSampler::draw(CounterRng& rng, std::size_t pair_index) const {
    const size_t n_phase = grid_.phases_deg.size();
    const double x1 = invert(marginal_cdf_[pair_index / n_phase], rng.uniform());

    // Conditional density of x2 given x1 for this phase pair.
    const int d = cutoff_.dim();
    const CMatrix& rho = rotated_[pair_index];
    const Eigen::VectorXd a = fock_wavefunctions(cutoff_.n_max(), x1);
    Eigen::MatrixXd cond = Eigen::MatrixXd::Zero(d, d);
    for (int m1 = 0; m1 < d; ++m1)
        for (int n1 = 0; n1 < d; ++n1) {
            const double w = a(m1) * a(n1);
            for (int m2 = 0; m2 < d; ++m2)
                for (int n2 = 0; n2 < d; ++n2)
                    cond(m2, n2) += w * rho(cutoff_.index(m1, m2), cutoff_.index(n1, n2)).real();
        }
    const Eigen::VectorXd dens = ((psi_table_ * cond).cwiseProduct(psi_table_)).rowwise().sum();
    const int n = lattice_.size();
    std::vector<double> cdf(n, 0.0);
    for (int i = 1; i < n; ++i) cdf[i] = cdf[i - 1] + std::max(0.0, dens(i - 1)) + std::max(0.0, dens(i));
    const double x2 = cdf.back() > 0.0 ? invert(cdf, rng.uniform()) : 0.0;
    return {x1, x2};
}

std::size_t schedule_pair(PhaseSchedule schedule, CounterRng& rng, std::size_t index, std::size_t n_events,
                          std::size_t pair_count) {
    if (schedule == PhaseSchedule::kSequential) {
        return std::min(pair_count - 1, index * pair_count / std::max<std::size_t>(n_events, 1));
    }
    return std::min(pair_count - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(pair_count)));
}

std::vector<QuadratureRecord> sample_records(const TwoModeState& state, const PhaseGrid& grid,
                                             std::size_t n_events, std::uint64_t seed,
                                             const SamplerOptions& options) {
    if (n_events == 0) throw ConfigError("n_events must be positive");
    const QuadratureSampler sampler(state, grid, options.lattice, options.normalization_tolerance);
    std::vector<QuadratureRecord> out;
    out.reserve(n_events);
    for (size_t i = 0; i < n_events; ++i) {
        CounterRng rng(seed, options.stream, i);
        const size_t pair = schedule_pair(options.schedule, rng, i, n_events, grid.pair_count());
        const auto [t1, t2] = grid.pair(pair);
        const auto [x1, x2] = sampler.draw(rng, pair);
        out.push_back({t1, t2, x1, x2, 0.0, 0.0});
    }
    return out;
}

}  // namespace homsync

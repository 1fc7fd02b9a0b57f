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

#include "homsync/temporal_modes.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "homsync/error.hpp"
#include "homsync/rng.hpp"

namespace homsync {
namespace {

// Unnormalized amplitude at time s after release.
double envelope(double s, double rise, double fall) {
    if (s < 0.0) return 0.0;
    return (1.0 - std::exp(-rise * s)) * std::exp(-fall * s);
}

// Integral of envelope^2 from s to infinity.
double tail_energy(double s, double rise, double fall) {
    s = std::max(s, 0.0);
    return std::exp(-2.0 * fall * s) / (2.0 * fall) -
           2.0 * std::exp(-(rise + 2.0 * fall) * s) / (rise + 2.0 * fall) +
           std::exp(-(2.0 * rise + 2.0 * fall) * s) / (2.0 * rise + 2.0 * fall);
}

double trapezoid_dot(const std::vector<double>& a, const std::vector<double>& b, double dt) {
    if (a.empty()) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    acc -= 0.5 * (a.front() * b.front() + a.back() * b.back());
    return acc * dt;
}

void check_common_grid(const ModeFunction& f, const ModeFunction& g) {
    if (f.size() != g.size() || std::abs(f.dt() - g.dt()) > 1e-12 || std::abs(f.t0() - g.t0()) > 1e-9) {
        throw ConfigError("mode functions are not on a common time grid");
    }
}

}  // namespace

int TimeGrid::size() const { return static_cast<int>(std::lround((t1 - t0) / dt)) + 1; }

void TimeGrid::validate() const {
    if (!(dt > 0.0) || !(t1 > t0)) throw ConfigError("time grid needs t0 < t1 and dt > 0");
}

ModeFunction::ModeFunction(double t0, double dt, std::vector<double> samples)
    : t0_(t0), dt_(dt), samples_(std::move(samples)) {
    if (!(dt_ > 0.0)) throw ConfigError("mode function time step must be positive");
    for (double v : samples_)
        if (!std::isfinite(v)) throw NumericalError("mode function has non-finite samples");
}

double ModeFunction::at(double t) const {
    const double u = (t - t0_) / dt_;
    if (u < 0.0 || u > static_cast<double>(samples_.size() - 1)) return 0.0;
    const auto i = static_cast<size_t>(std::floor(u));
    if (i + 1 >= samples_.size()) return samples_.back();
    const double frac = u - static_cast<double>(i);
    return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
}

ModeFunction ModeFunction::shifted(double delta_ns) const {
    std::vector<double> out(samples_.size());
    const double steps = delta_ns / dt_;
    const double whole = std::round(steps);
    if (std::abs(steps - whole) < 1e-9) {
        const auto k = static_cast<long>(whole);
        for (long i = 0; i < static_cast<long>(out.size()); ++i) {
            const long j = i - k;
            out[i] = (j >= 0 && j < static_cast<long>(samples_.size())) ? samples_[j] : 0.0;
        }
    } else {
        for (int i = 0; i < size(); ++i) out[i] = at(time(i) - delta_ns);
    }
    return ModeFunction(t0_, dt_, std::move(out));
}

double ModeFunction::norm_squared() const { return trapezoid_dot(samples_, samples_, dt_); }

ModeFunction ModeFunction::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw NumericalError("cannot normalize a zero mode function");
    std::vector<double> out(samples_);
    const double s = 1.0 / std::sqrt(n2);
    for (double& v : out) v *= s;
    return ModeFunction(t0_, dt_, std::move(out));
}

void MemoryModel::validate() const {
    if (!(initial_purity >= 0.0 && initial_purity <= 1.0)) throw ConfigError("initial purity must lie in [0, 1]");
    if (!(lifetime_ns > 0.0)) throw ConfigError("memory lifetime must be positive");
    if (!(gamma_rise > 0.0) || !(gamma_fall > 0.0)) throw ConfigError("mode shape rates must be positive");
    if (!(release_delay_ns >= 0.0)) throw ConfigError("release delay must be non-negative");
}

ModeFunction mode_function(const MemoryModel& model, double tau_ns, const TimeGrid& grid) {
    model.validate();
    grid.validate();
    if (!(tau_ns >= 0.0)) throw ConfigError("storage time must be non-negative");
    const double start = tau_ns + model.release_delay_ns;
    const double rise = model.gamma_rise;
    const double fall = model.gamma_fall;
    const double total = tail_energy(0.0, rise, fall);
    const double inside =
        tail_energy(grid.t0 - start, rise, fall) - tail_energy(grid.t1 - start, rise, fall);
    if (inside < (1.0 - 1e-6) * total) {
        throw NumericalError("time grid holds only " + std::to_string(inside / total) +
                             " of the wavepacket norm; extend the grid");
    }
    // Normalize against the untruncated lattice so that shifting by multiples
    // of dt changes nothing but the position.
    const double offset = std::fmod(std::fmod(grid.t0 - start, grid.dt) + grid.dt, grid.dt);
    double lattice_norm = 0.0;
    for (int k = 0;; ++k) {
        const double v = envelope(offset + k * grid.dt, rise, fall);
        lattice_norm += v * v;
        if (k * grid.dt * fall > 40.0) break;
    }
    const double scale = 1.0 / std::sqrt(lattice_norm * grid.dt);
    std::vector<double> samples(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        samples[i] = scale * envelope(grid.t0 + grid.dt * i - start, rise, fall);
    }
    return ModeFunction(grid.t0, grid.dt, std::move(samples));
}

double overlap(const ModeFunction& f, const ModeFunction& g) {
    check_common_grid(f, g);
    const double ip = trapezoid_dot(f.samples(), g.samples(), f.dt());
    return ip * ip;
}

ModeFunction signal_mode(const ModeFunction& f1, const ModeFunction& f2) {
    check_common_grid(f1, f2);
    std::vector<double> sum(f1.samples());
    for (size_t i = 0; i < sum.size(); ++i) sum[i] += f2.samples()[i];
    ModeFunction s(f1.t0(), f1.dt(), std::move(sum));
    if (s.norm_squared() < 1e-12) throw NumericalError("signal mode: the two wavepackets cancel");
    return s.normalized();
}

double intensity_fwhm(const ModeFunction& f) {
    const auto& v = f.samples();
    if (v.empty()) return 0.0;
    size_t peak = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] * v[i] > v[peak] * v[peak]) peak = i;
    const double half = 0.5 * v[peak] * v[peak];
    auto crossing = [&](size_t inside, size_t outside) {
        const double a = v[inside] * v[inside];
        const double b = v[outside] * v[outside];
        const double frac = (a - half) / (a - b);
        return f.time(static_cast<int>(inside)) +
               frac * (f.time(static_cast<int>(outside)) - f.time(static_cast<int>(inside)));
    };
    size_t l = peak;
    while (l > 0 && v[l - 1] * v[l - 1] >= half) --l;
    size_t r = peak;
    while (r + 1 < v.size() && v[r + 1] * v[r + 1] >= half) ++r;
    const double left = l > 0 ? crossing(l, l - 1) : f.time(0);
    const double right = r + 1 < v.size() ? crossing(r, r + 1) : f.time(f.size() - 1);
    return right - left;
}

MemoryModel calibrate_fall_rate_for_overlap(const MemoryModel& reference, double target_overlap,
                                            const TimeGrid& grid) {
    if (!(target_overlap > 0.0 && target_overlap <= 1.0)) throw ConfigError("target overlap must lie in (0, 1]");
    const ModeFunction f1 = mode_function(reference, 0.0, grid);
    auto overlap_at = [&](double factor) {
        MemoryModel m = reference;
        m.gamma_fall = reference.gamma_fall * factor;
        return overlap(f1, mode_function(m, 0.0, grid));
    };
    double lo = 1.0, hi = 4.0;
    if (overlap_at(hi) > target_overlap) throw NumericalError("overlap target not reachable by fall-rate scaling");
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (overlap_at(mid) > target_overlap ? lo : hi) = mid;
    }
    MemoryModel out = reference;
    out.gamma_fall = reference.gamma_fall * 0.5 * (lo + hi);
    return out;
}

PcaResult pca_estimate(const Eigen::MatrixXd& traces, double t0, double dt) {
    if (traces.rows() < 2) throw ConfigError("PCA needs at least two traces");
    if (traces.cols() < 2) throw ConfigError("PCA needs at least two time bins");
    const Eigen::Index n = traces.cols();
    // Chunked accumulation keeps the summation order fixed.
    constexpr Eigen::Index kChunk = 2048;
    Eigen::MatrixXd moment = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < traces.rows(); r += kChunk) {
        const Eigen::Index rows = std::min(kChunk, traces.rows() - r);
        moment.noalias() += traces.middleRows(r, rows).transpose() * traces.middleRows(r, rows);
    }
    moment /= static_cast<double>(traces.rows());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment);
    if (es.info() != Eigen::Success) throw NumericalError("PCA eigen-decomposition failed");
    const Eigen::VectorXd values = es.eigenvalues().reverse();
    const Eigen::MatrixXd vectors = es.eigenvectors().rowwise().reverse();
    if (values(0) - values(1) < 1e-6 * moment.trace()) {
        throw NumericalError("PCA leading eigenvalue is degenerate");
    }
    Eigen::VectorXd lead = vectors.col(0);
    Eigen::Index peak = 0;
    lead.cwiseAbs().maxCoeff(&peak);
    if (lead(peak) < 0.0) lead = -lead;
    std::vector<double> samples(lead.data(), lead.data() + lead.size());
    for (double& v : samples) v /= std::sqrt(dt);
    PcaResult out{ModeFunction(t0, dt, std::move(samples)), values, vectors};
    out.eigenvectors.col(0) = lead;
    return out;
}

Eigen::MatrixXd synthesize_traces(const ModeFunction& mode, int n_traces, TraceContent content,
                                  std::uint64_t seed) {
    if (n_traces <= 0) throw ConfigError("n_traces must be positive");
    const int n = mode.size();
    Eigen::VectorXd e(n);
    for (int i = 0; i < n; ++i) e(i) = mode.samples()[i];
    e.normalize();
    Eigen::MatrixXd out(n_traces, n);
    const double vacuum_sd = std::sqrt(0.5);
    for (int k = 0; k < n_traces; ++k) {
        CounterRng rng(seed, 0x7472616365ULL, static_cast<std::uint64_t>(k));
        std::normal_distribution<double> noise(0.0, vacuum_sd);
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = noise(rng);
        double q = 0.0;
        if (content == TraceContent::kVacuum) {
            q = noise(rng);
        } else {
            // |psi_1(q)|^2 ~ q^2 e^{-q^2}: q^2 is Gamma(3/2, 1).
            std::gamma_distribution<double> g(1.5, 1.0);
            q = std::sqrt(g(rng)) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        }
        x += (q - e.dot(x)) * e;
        out.row(k) = x.transpose();
    }
    return out;
}

double purity_vs_storage(const MemoryModel& model, double tau_ns) {
    model.validate();
    if (!(tau_ns >= 0.0)) throw ConfigError("storage time must be non-negative");
    return model.initial_purity * std::exp(-tau_ns / model.lifetime_ns);
}

double average_mismatch_purity(const MemoryModel& m1, const MemoryModel& m2, double tau_coh_ns,
                               const CoherenceOptions& opts) {
    const ModeFunction f1 = mode_function(m1, 0.0, opts.grid);
    const ModeFunction f2 = mode_function(m2, 0.0, opts.grid);
    const ModeFunction hom = signal_mode(f1, f2);
    auto purity_at = [&](double mismatch) {
        // Heralds at 0 and mismatch; the signal mode sits at their mean.
        const ModeFunction signal = hom.shifted(0.5 * mismatch);
        return 0.5 * (m1.initial_purity * overlap(signal, f1) +
                      m2.initial_purity * overlap(signal, f2.shifted(mismatch)));
    };
    if (tau_coh_ns <= 0.0) return purity_at(0.0);
    const int k = std::max(3, opts.mismatch_samples);
    const double h = 2.0 * tau_coh_ns / (k - 1);
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
        const double w = (i == 0 || i == k - 1) ? 0.5 : 1.0;
        acc += w * purity_at(-tau_coh_ns + h * i);
    }
    return acc * h / (2.0 * tau_coh_ns);
}

double coherence_time(const MemoryModel& m1, const MemoryModel& m2, const CoherenceOptions& opts) {
    if (!(opts.threshold > 0.0 && opts.threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    auto excess = [&](double tau) { return average_mismatch_purity(m1, m2, tau, opts) - opts.threshold; };
    double lo = 0.0;
    double hi = opts.search_max_ns;
    if (excess(lo) <= 0.0) {
        throw NumericalError("no crossing: average purity starts at or below the threshold");
    }
    if (excess(hi) > 0.0) throw NumericalError("no crossing within the search range");
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace homsync

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

#include "homsync/sync_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "homsync/error.hpp"
#include "homsync/rng.hpp"

namespace homsync {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Poisson herald times of one memory on the measurement clock (seconds).
class HeraldStream {
   public:
    HeraldStream(double rate, std::uint64_t seed) : rate_(rate), rng_(seed, 0x6865726cULL, 0) { advance(); }

    double head() const { return head_; }
    void advance() {
        if (rate_ <= 0.0) {
            head_ = kInf;
            return;
        }
        head_ += -std::log1p(-rng_.uniform()) / rate_;
    }
    void skip_to(double t) {
        while (head_ < t) advance();
    }

   private:
    double rate_;
    CounterRng rng_;
    double head_ = 0.0;
};

struct Clock {
    bool gated;
    double window;  // measurement window length, s
    double period;  // switching period, s
    double duty;

    // Index k with k * window <= u < (k + 1) * window, robust to rounding.
    double window_index(double u) const {
        double k = std::floor(u / window);
        if (k * window > u) k -= 1.0;
        if ((k + 1.0) * window <= u) k += 1.0;
        return k;
    }
    double window_start(double u) const { return gated ? window_index(u) * window : -kInf; }
    double window_end(double u) const { return gated ? (window_index(u) + 1.0) * window : kInf; }
    double wall(double u) const {
        if (!gated) return u / duty;
        const double k = window_index(u);
        return k * period + (u - k * window);
    }
};

class Recorder {
   public:
    Recorder(const SyncConfig& cfg, bool keep, int bins, SyncResult& out)
        : keep_(keep), quant_(cfg.quantization_ns), tau_ns_(cfg.tau_max_us * 1e3), out_(out) {
        out_.summary.histogram_bin_ns = tau_ns_ / bins;
        out_.summary.storage_histogram.assign(bins, 0);
    }

    void record(double wall_s, double storage1_ns, double storage2_ns) {
        if (quant_ > 0.0) {
            storage1_ns = std::round(storage1_ns / quant_) * quant_;
            storage2_ns = std::round(storage2_ns / quant_) * quant_;
        }
        ++out_.summary.n_events;
        const double waited = std::max(storage1_ns, storage2_ns);
        auto& hist = out_.summary.storage_histogram;
        const auto bin = std::min<std::size_t>(
            hist.size() - 1, static_cast<std::size_t>(std::max(0.0, waited / out_.summary.histogram_bin_ns)));
        ++hist[bin];
        if (keep_) out_.events.push_back({wall_s, storage1_ns, storage2_ns});
    }

   private:
    bool keep_;
    double quant_;
    double tau_ns_;
    SyncResult& out_;
};

void run_state_machine(const SyncConfig& cfg, const Clock& clock, double horizon, Recorder& rec) {
    const double r1 = cfg.rate1_cps / cfg.duty;
    const double r2 = cfg.rate2_cps / cfg.duty;
    HeraldStream s1(r1, cfg.stream_seed(1));
    HeraldStream s2(r2, cfg.stream_seed(2));
    const double tau = cfg.tau_max_us * 1e-6;
    const double dead = cfg.dead_time_enabled ? cfg.dead_time_us * 1e-6 : 0.0;
    double now = 0.0;
    while (true) {
        s1.skip_to(now);
        s2.skip_to(now);
        const bool first_is_1 = s1.head() <= s2.head();
        const double t_first = first_is_1 ? s1.head() : s2.head();
        if (t_first >= horizon) break;
        const double t_other = first_is_1 ? s2.head() : s1.head();
        const double window_end = clock.window_end(t_first);
        const double limit = std::min(t_first + tau, window_end);
        if (t_other <= limit && t_other < horizon) {
            const double stored_ns = (t_other - t_first) * 1e9;
            rec.record(clock.wall(t_other), first_is_1 ? stored_ns : 0.0, first_is_1 ? 0.0 : stored_ns);
            now = std::nextafter(t_other, kInf);
        } else {
            // The stored photon is dropped at the deadline; the controller then idles.
            now = limit + dead;
            if (now > window_end) now = window_end;
        }
    }
}

void run_coincidence(const SyncConfig& cfg, const Clock& clock, double horizon, Recorder& rec) {
    HeraldStream s1(cfg.rate1_cps / cfg.duty, cfg.stream_seed(1));
    HeraldStream s2(cfg.rate2_cps / cfg.duty, cfg.stream_seed(2));
    const double tau = cfg.tau_max_us * 1e-6;
    std::deque<double> recent1, recent2;
    while (true) {
        const bool from_1 = s1.head() <= s2.head();
        const double t = from_1 ? s1.head() : s2.head();
        if (t >= horizon) break;
        auto& mine = from_1 ? recent1 : recent2;
        auto& other = from_1 ? recent2 : recent1;
        while (!other.empty() && other.front() < t - tau) other.pop_front();
        const double window_start = clock.window_start(t);
        for (double o : other) {
            if (o < window_start) continue;
            const double stored_ns = (t - o) * 1e9;
            // The other memory heralded first and holds its photon.
            rec.record(clock.wall(t), from_1 ? 0.0 : stored_ns, from_1 ? stored_ns : 0.0);
        }
        while (!mine.empty() && mine.front() < t - tau) mine.pop_front();
        mine.push_back(t);
        if (from_1) {
            s1.advance();
        } else {
            s2.advance();
        }
    }
}

}  // namespace

void SyncConfig::validate() const {
    if (!(rate1_cps >= 0.0) || !(rate2_cps >= 0.0)) throw ConfigError("herald rates must be non-negative");
    if (!(duty > 0.0 && duty <= 1.0)) throw ConfigError("duty must lie in (0, 1]");
    if (!(tau_max_us > 0.0)) throw ConfigError("tau_max must be positive");
    if (!(dead_time_us >= 0.0)) throw ConfigError("dead time must be non-negative");
    if (!(total_time_s > 0.0)) throw ConfigError("total time must be positive");
    if (!(switching_rate_hz > 0.0)) throw ConfigError("switching rate must be positive");
    if (!(quantization_ns >= 0.0)) throw ConfigError("quantization must be non-negative");
    if (duty_gating && tau_max_us * 1e-6 >= duty / switching_rate_hz) {
        throw ConfigError("tau_max does not fit inside one measurement window");
    }
}

std::uint64_t SyncConfig::stream_seed(int memory) const {
    if (memory == 1 && seed1) return *seed1;
    if (memory == 2 && seed2) return *seed2;
    return derive_seed(seed, memory == 1 ? "memory-1" : "memory-2");
}

double analytic_dual_rate(const SyncConfig& cfg) {
    return 2.0 * cfg.tau_max_us * 1e-6 * cfg.rate1_cps * cfg.rate2_cps / cfg.duty;
}

bool small_window_regime(const SyncConfig& cfg) {
    const double tau = cfg.tau_max_us * 1e-6;
    const double r = std::max(cfg.rate1_cps, cfg.rate2_cps);
    return r == 0.0 || tau <= 0.05 * cfg.duty / r;
}

SyncResult simulate_dual_heralds(const SyncConfig& cfg, bool keep_events, int histogram_bins) {
    cfg.validate();
    if (histogram_bins <= 0) throw ConfigError("histogram needs at least one bin");
    SyncResult out;
    out.summary.total_time_s = cfg.total_time_s;
    out.summary.measurement_time_s = cfg.duty * cfg.total_time_s;
    out.summary.analytic_rate_cps = analytic_dual_rate(cfg);
    if (out.summary.analytic_rate_cps * cfg.total_time_s < 1.0) {
        out.warnings.push_back("total_time is too short for one expected dual-herald event");
    }
    if (!small_window_regime(cfg)) {
        out.warnings.push_back("tau_max is not small against duty/R; the analytic rate is only approximate");
    }
    const Clock clock{cfg.duty_gating, cfg.duty / cfg.switching_rate_hz, 1.0 / cfg.switching_rate_hz, cfg.duty};
    Recorder rec(cfg, keep_events, histogram_bins, out);
    const double horizon = out.summary.measurement_time_s;
    if (cfg.model == SyncModel::kStateMachine) {
        run_state_machine(cfg, clock, horizon, rec);
    } else {
        run_coincidence(cfg, clock, horizon, rec);
    }
    const auto n = static_cast<double>(out.summary.n_events);
    out.summary.empirical_rate_cps = n / cfg.total_time_s;
    out.summary.rate_std_error_cps = std::sqrt(n) / cfg.total_time_s;
    return out;
}

std::vector<WindowPoint> purity_vs_window(const std::vector<HeraldEvent>& events,
                                          const std::vector<double>& tau_max_grid_ns, const MemoryModel& m1,
                                          const MemoryModel& m2) {
    m1.validate();
    m2.validate();
    std::vector<WindowPoint> out;
    out.reserve(tau_max_grid_ns.size());
    for (double tau : tau_max_grid_ns) {
        WindowPoint pt;
        pt.tau_max_ns = tau;
        double acc1 = 0.0, acc2 = 0.0;
        for (const auto& e : events) {
            if (std::max(e.storage1_ns, e.storage2_ns) > tau) continue;
            acc1 += purity_vs_storage(m1, e.storage1_ns);
            acc2 += purity_vs_storage(m2, e.storage2_ns);
            ++pt.count;
        }
        pt.empty = pt.count == 0;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        pt.mean_purity1 = pt.empty ? nan : acc1 / static_cast<double>(pt.count);
        pt.mean_purity2 = pt.empty ? nan : acc2 / static_cast<double>(pt.count);
        out.push_back(pt);
    }
    return out;
}

std::vector<WindowPoint> purity_vs_window(const SyncConfig& cfg, const std::vector<double>& tau_max_grid_ns,
                                          const MemoryModel& m1, const MemoryModel& m2) {
    SyncConfig run = cfg;
    if (!tau_max_grid_ns.empty()) {
        run.tau_max_us = *std::max_element(tau_max_grid_ns.begin(), tau_max_grid_ns.end()) * 1e-3;
    }
    return purity_vs_window(simulate_dual_heralds(run).events, tau_max_grid_ns, m1, m2);
}

LineFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("line fit needs matching samples");
    double sxy = 0.0, sxx = 0.0, mean = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        mean += y[i];
    }
    mean /= static_cast<double>(y.size());
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        ss_res += std::pow(y[i] - fit.slope * x[i], 2);
        ss_tot += std::pow(y[i] - mean, 2);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double enhancement_factor(double tau_max_ns, double tau_coh_ns) {
    if (!(tau_coh_ns > 0.0)) throw ConfigError("coherence time must be positive");
    return tau_max_ns / tau_coh_ns;
}

}  // namespace homsync

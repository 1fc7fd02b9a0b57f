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

// Dual-heralding synchronization of two memories: the small-window rate
// formula and an event-level Monte-Carlo model of the timing controller.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homsync/temporal_modes.hpp"

namespace homsync {

enum class SyncModel {
    /// Timing controller: the first herald occupies its memory, the other
    /// memory must herald within tau_max, failures cost the dead time.
    kStateMachine,
    /// Every pair of heralds from different memories closer than tau_max
    /// counts, with no memory occupancy. This is the process the analytic
    /// rate formula describes exactly.
    kCoincidence,
};

struct SyncConfig {
    double rate1_cps = 3200.0;  // wall-clock average herald rates
    double rate2_cps = 3200.0;
    double duty = 0.4;
    double tau_max_us = 2.0;
    double dead_time_us = 5.0;
    double total_time_s = 60.0;
    std::uint64_t seed = 1;
    /// Per-memory stream seeds; derived from `seed` when absent.
    std::optional<std::uint64_t> seed1;
    std::optional<std::uint64_t> seed2;
    bool dead_time_enabled = true;
    /// Deterministic measurement windows (duty / switching_rate_hz long);
    /// when off, measurement time is one contiguous stretch.
    bool duty_gating = true;
    double switching_rate_hz = 5000.0;
    /// Rounds storage times to this step when positive (controller clock).
    double quantization_ns = 0.0;
    SyncModel model = SyncModel::kStateMachine;

    void validate() const;
    std::uint64_t stream_seed(int memory) const;
};

struct HeraldEvent {
    double release_time_s = 0.0;
    double storage1_ns = 0.0;
    double storage2_ns = 0.0;
};

struct SyncSummary {
    std::int64_t n_events = 0;
    double total_time_s = 0.0;
    double measurement_time_s = 0.0;
    double empirical_rate_cps = 0.0;
    /// Poisson standard error of the empirical rate.
    double rate_std_error_cps = 0.0;
    double analytic_rate_cps = 0.0;
    double histogram_bin_ns = 0.0;
    std::vector<std::int64_t> storage_histogram;  // waiting photon's storage time
};

struct SyncResult {
    std::vector<HeraldEvent> events;
    SyncSummary summary;
    std::vector<std::string> warnings;
};

/// 2 tau_max R1 R2 / duty, in counts per second.
double analytic_dual_rate(const SyncConfig& cfg);
/// Whether tau_max is small against duty / R for both memories (factor 0.05).
bool small_window_regime(const SyncConfig& cfg);

SyncResult simulate_dual_heralds(const SyncConfig& cfg, bool keep_events = true, int histogram_bins = 20);

struct WindowPoint {
    double tau_max_ns = 0.0;
    double mean_purity1 = 0.0;  // NaN when no events fall in the window
    double mean_purity2 = 0.0;
    std::int64_t count = 0;
    bool empty = true;
};

/// Purity and event count of the events whose storage times lie in
/// [0, tau_max] for each tau_max of the grid.
std::vector<WindowPoint> purity_vs_window(const std::vector<HeraldEvent>& events,
                                          const std::vector<double>& tau_max_grid_ns, const MemoryModel& m1,
                                          const MemoryModel& m2);
std::vector<WindowPoint> purity_vs_window(const SyncConfig& cfg, const std::vector<double>& tau_max_grid_ns,
                                          const MemoryModel& m1, const MemoryModel& m2);

struct LineFit {
    double slope = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line y = slope * x through the origin.
LineFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

/// Event-rate gain of synchronized over unsynchronized operation.
double enhancement_factor(double tau_max_ns, double tau_coh_ns);

}  // namespace homsync

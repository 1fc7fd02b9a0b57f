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

#include "homsync/pipeline.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "homsync/error.hpp"
#include "homsync/io.hpp"
#include "homsync/rng.hpp"

namespace homsync {
namespace {

using nlohmann::json;

template <typename F>
auto in_stage(const char* stage, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(stage) + ": " + e.what());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(stage) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(stage) + ": " + e.what());
    }
}

std::string phase_tag(double theta) { return std::to_string(static_cast<long>(std::lround(theta))); }

bool grid_has(const PhaseGrid& grid, double theta) {
    for (double p : grid.phases_deg) {
        if (std::abs(p - theta) < 1e-9) return true;
    }
    return false;
}

struct StorageKey {
    long q1, q2;
    auto operator<=>(const StorageKey&) const = default;
};

}  // namespace

std::uint64_t stage_seed(const ExperimentConfig& cfg, const std::string& stage) { return derive_seed(cfg.seed, stage); }

TwoModeState event_state(const ExperimentConfig& cfg, double storage1_ns, double storage2_ns) {
    const FockCutoff cutoff(cfg.n_max);
    SingleModeState in1 = cfg.source1.state(cutoff);
    SingleModeState in2 = cfg.source2.state(cutoff);
    if (cfg.storage_loss) {
        in1 = loss_channel(in1, std::exp(-storage1_ns / cfg.memory1.lifetime_ns));
        in2 = loss_channel(in2, std::exp(-storage2_ns / cfg.memory2.lifetime_ns));
    }
    return hom_with_overlap(in1, in2, cfg.overlap);
}

void ArtifactWriter::write(const std::string& relative, const std::string& content) {
    write_text_file(dir_ / relative, content);
    files_.push_back({{"path", relative}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
}

json ArtifactWriter::write_manifest(json extra) {
    extra["files"] = files_;
    const std::string text = dump_json(extra);
    write_text_file(dir_ / "manifest.json", text);
    return extra;
}

SimulationResult simulate_experiment(const ExperimentConfig& cfg) {
    in_stage("config", [&] { cfg.validate(); });
    const FockCutoff cutoff(cfg.n_max);
    std::vector<std::string> warnings;

    SyncConfig sync_cfg = cfg.sync;
    sync_cfg.seed = stage_seed(cfg, "sync");
    SyncResult sync = in_stage("sync", [&] { return simulate_dual_heralds(sync_cfg); });
    for (const auto& w : sync.warnings) warnings.push_back("sync: " + w);
    if (sync.events.empty()) throw NumericalError("sync: no dual-herald events; raise total_time_s");
    if (sync.events.size() < cfg.events) {
        warnings.push_back("sync: " + std::to_string(sync.events.size()) + " simulated events are reused cyclically for " +
                           std::to_string(cfg.events) + " homodyne events");
    }

    // Per-event states, grouped by quantized storage times.
    const double q = cfg.storage_quantum_ns;
    std::map<StorageKey, std::size_t> key_index;
    std::vector<StorageKey> keys;
    std::vector<std::size_t> event_key(cfg.events);
    for (std::size_t i = 0; i < cfg.events; ++i) {
        const HeraldEvent& e = sync.events[i % sync.events.size()];
        const StorageKey k{std::lround(e.storage1_ns / q), std::lround(e.storage2_ns / q)};
        auto [it, fresh] = key_index.emplace(k, keys.size());
        if (fresh) keys.push_back(k);
        event_key[i] = it->second;
    }
    std::vector<TwoModeState> states;
    std::vector<std::size_t> key_count(keys.size(), 0);
    for (std::size_t k : event_key) ++key_count[k];
    CMatrix mixture = CMatrix::Zero(cutoff.two_mode_dim(), cutoff.two_mode_dim());
    in_stage("interference", [&] {
        for (std::size_t k = 0; k < keys.size(); ++k) {
            states.push_back(event_state(cfg, keys[k].q1 * q, keys[k].q2 * q));
            mixture += states.back().rho() * (static_cast<double>(key_count[k]) / static_cast<double>(cfg.events));
        }
    });

    const std::uint64_t sample_seed = stage_seed(cfg, "sampling");
    std::vector<QuadratureRecord> records;
    records.reserve(cfg.events);
    in_stage("sampling", [&] {
        std::vector<std::unique_ptr<QuadratureSampler>> samplers(keys.size());
        for (std::size_t i = 0; i < cfg.events; ++i) {
            const std::size_t k = event_key[i];
            if (!samplers[k]) samplers[k] = std::make_unique<QuadratureSampler>(states[k], cfg.phase_grid);
            CounterRng rng(sample_seed, 0, i);
            const std::size_t pair =
                schedule_pair(PhaseSchedule::kRandom, rng, i, cfg.events, cfg.phase_grid.pair_count());
            const auto [t1, t2] = cfg.phase_grid.pair(pair);
            const auto [x1, x2] = samplers[k]->draw(rng, pair);
            records.push_back({t1, t2, x1, x2, keys[k].q1 * q, keys[k].q2 * q});
        }
    });
    return SimulationResult{std::move(sync), TwoModeState(cutoff, mixture), keys.size(), std::move(records),
                            std::move(warnings)};
}

PipelineResult run_pipeline(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    in_stage("config", [&] { cfg.validate(); });
    const FockCutoff cutoff(cfg.n_max);
    ArtifactWriter out(out_dir);
    const std::string config_text = dump_json(config_to_json(cfg));
    out.write("config.json", config_text);

    SimulationResult sim = simulate_experiment(cfg);
    std::vector<std::string> warnings = sim.warnings;
    const auto& sync = sim.sync;
    const auto& records = sim.records;
    const TwoModeState& model_state = sim.model_state;
    out.write("sync/events.csv", events_csv(sync.events));
    out.write("sync/summary.json", dump_json(sync_summary_json(sync.summary, sync.warnings)));
    out.write("state_model.json",
              dump_json(state_to_json(model_state, {{"distinct_storage_states", sim.distinct_states}})));
    out.write("records.csv", records_to_csv(records));

    // Reconstruction.
    const BinnedData binned = bin_records(records, cfg.mle.bin_width);
    MleResult mle = in_stage("tomography", [&] { return mle_reconstruct(binned, cutoff, cfg.mle); });
    for (const auto& w : mle.warnings) warnings.push_back("tomography: " + w);
    out.write("state.json", dump_json(state_to_json(mle.state, {{"iterations", mle.iterations},
                                                                {"converged", mle.converged},
                                                                {"log_likelihood_per_event", mle.log_likelihood_per_event},
                                                                {"dilution_backoffs", mle.dilution_backoffs},
                                                                {"warnings", mle.warnings}})));
    std::string mle_log = "iteration,log_likelihood_per_event\n";
    for (std::size_t i = 0; i < mle.log_likelihood_trace.size(); ++i) {
        mle_log += std::to_string(i) + ',' + format_double(mle.log_likelihood_trace[i]) + '\n';
    }
    out.write("mle_log.csv", mle_log);

    // Metrics.
    MetricsReport report = in_stage("metrics", [&] {
        if (cfg.bootstrap_resamples == 0) return MetricsReport{compute_metrics(mle.state), std::nullopt, 0};
        BootstrapOptions b;
        b.resamples = cfg.bootstrap_resamples;
        b.seed = stage_seed(cfg, "bootstrap");
        b.mle = cfg.mle;
        b.mle.tolerance = cfg.bootstrap_tolerance;
        return bootstrap_metrics(binned, mle.state, b);
    });
    const MetricsValues model_metrics = in_stage("metrics", [&] { return compute_metrics(model_state); });
    json metrics_doc = metrics_report_json(report);
    metrics_doc["model_state"] = metrics_values_json(model_metrics);
    out.write("metrics.json", dump_json(metrics_doc));

    // Phase-space slices.
    std::vector<WignerSlice> slices;
    in_stage("wigner", [&] {
        const std::vector<std::pair<PhaseAxis, PhaseAxis>> planes{
            {PhaseAxis::kX1, PhaseAxis::kX2}, {PhaseAxis::kP1, PhaseAxis::kP2}, {PhaseAxis::kX1, PhaseAxis::kP1}};
        for (const auto& [row, col] : planes) {
            const SlicePlane plane{row, col, {0.0, 0.0, 0.0, 0.0}};
            slices.push_back(wigner_slice(mle.state, plane, cfg.wigner_grid, cfg.wigner_grid));
            const std::string stem = std::string("wigner/") + axis_name(row) + "_" + axis_name(col);
            out.write(stem + ".csv", wigner_slice_csv(slices.back()));
            out.write(stem + ".json", dump_json(wigner_slice_metadata(slices.back())));
        }
    });

    // Quadrature histograms, with a control run lacking synchronization.
    const FockCutoff c = cutoff;
    const TwoModeState control_state = in_stage("control", [&] {
        return hom_with_overlap(cfg.source1.state(c), cfg.source2.state(c), cfg.control_overlap);
    });
    const auto control_records = in_stage("control", [&] {
        SamplerOptions opts;
        return sample_records(control_state, cfg.phase_grid, cfg.control_events, stage_seed(cfg, "control"), opts);
    });
    out.write("control/records.csv", records_to_csv(control_records));
    out.write("control/state_model.json", dump_json(state_to_json(control_state)));
    for (double theta : {0.0, 90.0}) {
        if (!grid_has(cfg.phase_grid, theta)) {
            warnings.push_back("histograms: phase " + phase_tag(theta) + " is not on the phase grid");
            continue;
        }
        const auto& h = cfg.histogram;
        const std::string name = "hist_" + phase_tag(theta) + "_" + phase_tag(theta) + ".csv";
        out.write("histograms/sync/" + name,
                  histogram_csv(quadrature_histogram(records, theta, theta, h.lo, h.width, h.cells)));
        out.write("histograms/control/" + name,
                  histogram_csv(quadrature_histogram(control_records, theta, theta, h.lo, h.width, h.cells)));
    }

    SyncConfig sync_cfg = cfg.sync;
    sync_cfg.seed = stage_seed(cfg, "sync");
    json seeds = {{"root", cfg.seed},
                  {"sync_memory1", sync_cfg.stream_seed(1)},
                  {"sync_memory2", sync_cfg.stream_seed(2)},
                  {"sampling", stage_seed(cfg, "sampling")},
                  {"bootstrap", stage_seed(cfg, "bootstrap")},
                  {"control", stage_seed(cfg, "control")}};
    json manifest = out.write_manifest({{"schema_version", kSchemaVersion},
                                        {"config_sha256", sha256_hex(config_text)},
                                        {"seeds", seeds},
                                        {"converged", mle.converged},
                                        {"warnings", warnings}});

    return PipelineResult{model_state, std::move(mle),      report, model_metrics, std::move(slices),
                          sync.summary, std::move(manifest), std::move(warnings)};
}

}  // namespace homsync

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

// homsync command-line tool.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical
// failure, 4 non-convergence.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homsync/config.hpp"
#include "homsync/error.hpp"
#include "homsync/io.hpp"
#include "homsync/metrics.hpp"
#include "homsync/pipeline.hpp"
#include "homsync/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace homsync;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitConvergence = 4;

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<int> cutoff;
};

ExperimentConfig resolve_config(const GlobalOptions& g) {
    ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{} : load_config(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.cutoff) cfg.n_max = *g.cutoff;
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    cfg.validate();
    return cfg;
}

void log(const std::string& msg) { std::cerr << msg << "\n"; }

std::string csv_row(std::initializer_list<double> values) {
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += ',';
        out += format_double(v);
    }
    return out + '\n';
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
    std::size_t events = 0;
    std::string format = "csv";
    std::string state = "experiment";
};

int cmd_simulate(const GlobalOptions& g, const SimulateArgs& a) {
    ExperimentConfig cfg = resolve_config(g);
    if (a.events > 0) cfg.events = a.events;
    ArtifactWriter out(cfg.output_dir);
    std::vector<QuadratureRecord> records;
    json info;
    if (a.state == "experiment") {
        SimulationResult sim = simulate_experiment(cfg);
        for (const auto& w : sim.warnings) log("warning: " + w);
        out.write("state_model.json", dump_json(state_to_json(sim.model_state)));
        out.write("sync/summary.json", dump_json(sync_summary_json(sim.sync.summary, sim.sync.warnings)));
        records = std::move(sim.records);
    } else {
        const FockCutoff cutoff(cfg.n_max);
        TwoModeState state = hom_state(cutoff);
        if (a.state == "hom90") {
            state = hom_state(cutoff, M_PI / 2);
        } else if (a.state == "fock11") {
            state = TwoModeState::fock(cutoff, 1, 1);
        } else if (a.state == "sources") {
            state = hom_with_overlap(cfg.source1.state(cutoff), cfg.source2.state(cutoff), cfg.overlap);
        } else if (a.state != "hom") {
            throw ConfigError("unknown --state " + a.state);
        }
        out.write("state_model.json", dump_json(state_to_json(state)));
        records = sample_records(state, cfg.phase_grid, cfg.events, stage_seed(cfg, "sampling"));
    }
    out.write(a.format == "jsonl" ? "records.jsonl" : "records.csv",
              a.format == "jsonl" ? records_to_jsonl(records) : records_to_csv(records));
    out.write_manifest({{"command", "simulate"}, {"seed", cfg.seed}, {"events", records.size()}});
    log("wrote " + std::to_string(records.size()) + " records to " + cfg.output_dir);
    return 0;
}

// tomo ----------------------------------------------------------------------

struct TomoArgs {
    std::string records;
    std::optional<double> bin_width;
    std::optional<int> max_iterations;
    std::optional<double> tolerance;
};

int cmd_tomo(const GlobalOptions& g, const TomoArgs& a) {
    ExperimentConfig cfg = resolve_config(g);
    if (a.bin_width) cfg.mle.bin_width = *a.bin_width;
    if (a.max_iterations) cfg.mle.max_iterations = *a.max_iterations;
    if (a.tolerance) cfg.mle.tolerance = *a.tolerance;
    cfg.mle.validate();
    const auto records = load_records(a.records);
    if (records.empty()) throw ConfigError("no records in " + a.records);
    const MleResult r = mle_reconstruct(bin_records(records, cfg.mle.bin_width), FockCutoff(cfg.n_max), cfg.mle);
    for (const auto& w : r.warnings) log("warning: " + w);
    ArtifactWriter out(cfg.output_dir);
    out.write("state.json", dump_json(state_to_json(r.state, {{"iterations", r.iterations},
                                                             {"converged", r.converged},
                                                             {"log_likelihood_per_event", r.log_likelihood_per_event},
                                                             {"dilution_backoffs", r.dilution_backoffs},
                                                             {"events", records.size()},
                                                             {"warnings", r.warnings}})));
    std::string trace = "iteration,log_likelihood_per_event\n";
    for (std::size_t i = 0; i < r.log_likelihood_trace.size(); ++i) {
        trace += std::to_string(i) + ',' + format_double(r.log_likelihood_trace[i]) + '\n';
    }
    out.write("mle_log.csv", trace);
    out.write_manifest({{"command", "tomo"}, {"records", a.records}, {"converged", r.converged}});
    log("iterations " + std::to_string(r.iterations) + (r.converged ? ", converged" : ", not converged"));
    return r.converged ? 0 : kExitConvergence;
}

// wigner --------------------------------------------------------------------

struct WignerArgs {
    std::string state;
    std::vector<std::string> planes{"x1:x2", "p1:p2", "x1:p1"};
    std::vector<std::string> fixed;
    double lo = -3.0, hi = 3.0, step = 0.05;
};

int cmd_wigner(const GlobalOptions& g, const WignerArgs& a) {
    ExperimentConfig cfg = resolve_config(g);
    const TwoModeState state = load_state(a.state);
    std::array<double, 4> fixed{0.0, 0.0, 0.0, 0.0};
    for (const auto& f : a.fixed) {
        const auto eq = f.find('=');
        if (eq == std::string::npos) throw ConfigError("--fixed expects axis=value, got " + f);
        fixed[static_cast<int>(parse_axis(f.substr(0, eq)))] = parse_double(f.substr(eq + 1));
    }
    const AxisGrid grid{a.lo, a.hi, a.step};
    ArtifactWriter out(cfg.output_dir);
    for (const auto& p : a.planes) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) throw ConfigError("--plane expects row:col, got " + p);
        const SlicePlane plane{parse_axis(p.substr(0, colon)), parse_axis(p.substr(colon + 1)), fixed};
        const WignerSlice s = wigner_slice(state, plane, grid, grid);
        const std::string stem = std::string(axis_name(plane.row_axis)) + "_" + axis_name(plane.col_axis);
        out.write(stem + ".csv", wigner_slice_csv(s));
        out.write(stem + ".json", dump_json(wigner_slice_metadata(s)));
        log(stem + ": min " + format_double(s.min_value) + " at (" + format_double(s.min_row) + ", " +
            format_double(s.min_col) + ")");
    }
    out.write_manifest({{"command", "wigner"}, {"state", a.state}});
    return 0;
}

// metrics -------------------------------------------------------------------

struct MetricsArgs {
    std::string state;
    std::string records;
    int resamples = 0;
};

int cmd_metrics(const GlobalOptions& g, const MetricsArgs& a) {
    ExperimentConfig cfg = resolve_config(g);
    const TwoModeState state = load_state(a.state);
    MetricsReport report{compute_metrics(state), std::nullopt, 0};
    if (a.resamples > 0) {
        if (a.records.empty()) throw ConfigError("--resamples needs --records");
        BootstrapOptions b;
        b.resamples = a.resamples;
        b.seed = stage_seed(cfg, "bootstrap");
        b.mle = cfg.mle;
        b.mle.tolerance = cfg.bootstrap_tolerance;
        report = bootstrap_metrics(bin_records(load_records(a.records), cfg.mle.bin_width), state, b);
    }
    const std::string text = dump_json(metrics_report_json(report));
    ArtifactWriter out(cfg.output_dir);
    out.write("metrics.json", text);
    out.write_manifest({{"command", "metrics"}, {"state", a.state}});
    std::cout << text;
    return 0;
}

// sync ----------------------------------------------------------------------

struct SyncArgs {
    double tau_lo_us = 0.0, tau_hi_us = 2.0, tau_step_us = 0.1;
    std::optional<double> total_time_s;
    bool no_dead_time = false;
    bool no_gating = false;
    std::string model;
    bool events = false;
};

int cmd_sync(const GlobalOptions& g, const SyncArgs& a) {
    ExperimentConfig cfg = resolve_config(g);
    SyncConfig base = cfg.sync;
    base.seed = stage_seed(cfg, "sync");
    if (a.total_time_s) base.total_time_s = *a.total_time_s;
    if (a.no_dead_time) base.dead_time_enabled = false;
    if (a.no_gating) base.duty_gating = false;
    if (a.model == "coincidence") base.model = SyncModel::kCoincidence;
    if (!a.model.empty() && a.model != "coincidence" && a.model != "state_machine") {
        throw ConfigError("--model must be state_machine or coincidence");
    }
    if (!(a.tau_step_us > 0.0) || a.tau_hi_us < a.tau_lo_us || a.tau_lo_us < 0.0) {
        throw ConfigError("bad tau_max sweep");
    }
    const int steps = static_cast<int>(std::lround((a.tau_hi_us - a.tau_lo_us) / a.tau_step_us));
    std::string rate = "tau_max_us,rate_cps\n", analytic = "tau_max_us,rate_cps\n";
    std::vector<double> xs, ys;
    SyncResult last;
    for (int i = 0; i <= steps; ++i) {
        SyncConfig c = base;
        c.tau_max_us = a.tau_lo_us + a.tau_step_us * i;
        double r = 0.0;
        if (c.tau_max_us > 0.0) {
            last = simulate_dual_heralds(c, i == steps);
            r = last.summary.empirical_rate_cps;
        }
        rate += csv_row({c.tau_max_us, r});
        analytic += csv_row({c.tau_max_us, c.tau_max_us > 0.0 ? analytic_dual_rate(c) : 0.0});
        xs.push_back(c.tau_max_us);
        ys.push_back(r);
    }
    const LineFit fit = fit_through_origin(xs, ys);
    std::vector<double> grid_ns;
    for (double t : xs) grid_ns.push_back(t * 1e3);
    std::string window = "tau_max_ns,mean_purity1,mean_purity2,events\n";
    for (const auto& p : purity_vs_window(last.events, grid_ns, cfg.memory1, cfg.memory2)) {
        window += format_double(p.tau_max_ns) + ',' + format_double(p.mean_purity1) + ',' +
                  format_double(p.mean_purity2) + ',' + std::to_string(p.count) + '\n';
    }
    ArtifactWriter out(cfg.output_dir);
    out.write("rate_curve.csv", rate);
    out.write("analytic_curve.csv", analytic);
    out.write("purity_window.csv", window);
    json summary = sync_summary_json(last.summary, last.warnings);
    summary["fit_slope_cps_per_us"] = fit.slope;
    summary["fit_r_squared"] = fit.r_squared;
    summary["config"] = sync_to_json(base);
    out.write("summary.json", dump_json(summary));
    if (a.events) out.write("events.csv", events_csv(last.events));
    out.write_manifest({{"command", "sync"}, {"seed", cfg.seed}});
    for (const auto& w : last.warnings) log("warning: " + w);
    log("slope " + format_double(fit.slope) + " cps/us, R^2 " + format_double(fit.r_squared));
    return 0;
}

// modes ---------------------------------------------------------------------

struct ModesArgs {
    int traces = 40000;
    double tau_max_ns = 1800.0;
    bool calibrate = true;
};

int cmd_modes(const GlobalOptions& g, const ModesArgs& a) {
    ExperimentConfig cfg = resolve_config(g);
    if (a.traces < 2) throw ConfigError("--traces must be at least 2");
    const MemoryModel m1 = cfg.memory1;
    MemoryModel m2 = cfg.memory2;
    const ModeFunction f1 = mode_function(m1, 0.0);
    const double raw_overlap = overlap(f1, mode_function(m2, 0.0));
    if (a.calibrate) {
        const MemoryModel shaped = calibrate_fall_rate_for_overlap(m1, cfg.overlap);
        m2.gamma_rise = shaped.gamma_rise;
        m2.gamma_fall = shaped.gamma_fall;
        m2.release_delay_ns = shaped.release_delay_ns;
    }
    const ModeFunction f2 = mode_function(m2, 0.0);

    const TimeGrid pca_grid{-100.0, 700.0, 4.0};
    const ModeFunction generator = mode_function(m1, 0.0, pca_grid);
    const Eigen::MatrixXd traces =
        synthesize_traces(generator, a.traces, TraceContent::kSinglePhoton, stage_seed(cfg, "traces"));
    const PcaResult pca = pca_estimate(traces, pca_grid.t0, pca_grid.dt);
    const double pca_overlap = overlap(pca.mode, generator);

    const double tau_coh = coherence_time(m1, m2);
    std::string storage = "storage_ns,purity1,purity2\n";
    for (int t = 0; t <= 2000; t += 50) {
        storage += csv_row({double(t), purity_vs_storage(m1, t), purity_vs_storage(m2, t)});
    }
    ArtifactWriter out(cfg.output_dir);
    out.write("memory1_mode.csv", mode_function_csv(f1));
    out.write("memory2_mode.csv", mode_function_csv(f2));
    out.write("signal_mode.csv", mode_function_csv(signal_mode(f1, f2)));
    out.write("pca_mode.csv", mode_function_csv(pca.mode));
    out.write("purity_storage.csv", storage);
    std::vector<double> eig(pca.eigenvalues.data(), pca.eigenvalues.data() + std::min<Eigen::Index>(5, pca.eigenvalues.size()));
    json summary = {{"memory1", memory_to_json(m1)},
                    {"memory2", memory_to_json(m2)},
                    {"overlap_uncalibrated", raw_overlap},
                    {"overlap", overlap(f1, f2)},
                    {"intensity_fwhm_ns", {intensity_fwhm(f1), intensity_fwhm(f2)}},
                    {"pca_overlap", pca_overlap},
                    {"pca_leading_eigenvalues", eig},
                    {"coherence_time_ns", tau_coh},
                    {"tau_max_ns", a.tau_max_ns},
                    {"enhancement", enhancement_factor(a.tau_max_ns, tau_coh)}};
    const std::string text = dump_json(summary);
    out.write("modes.json", text);
    out.write_manifest({{"command", "modes"}, {"seed", cfg.seed}});
    std::cout << text;
    return 0;
}

// figures -------------------------------------------------------------------

struct FiguresArgs {
    std::string records;
};

int cmd_figures(const GlobalOptions& g, const FiguresArgs& a) {
    ExperimentConfig cfg = resolve_config(g);
    const auto records = load_records(a.records);
    ArtifactWriter out(cfg.output_dir);
    json panels = json::array();
    const auto& h = cfg.histogram;
    for (std::size_t i = 0; i < cfg.phase_grid.pair_count(); ++i) {
        const auto [t1, t2] = cfg.phase_grid.pair(i);
        const QuadratureHistogram hist = quadrature_histogram(records, t1, t2, h.lo, h.width, h.cells);
        const std::string name = "hist_" + std::to_string(std::lround(t1)) + "_" + std::to_string(std::lround(t2)) + ".csv";
        out.write(name, histogram_csv(hist));
        panels.push_back({{"row", i / cfg.phase_grid.phases_deg.size()},
                          {"col", i % cfg.phase_grid.phases_deg.size()},
                          {"theta1_deg", t1},
                          {"theta2_deg", t2},
                          {"events", hist.total},
                          {"file", name}});
    }
    out.write("index.json", dump_json({{"records", a.records},
                                       {"grid", {{"lo", h.lo}, {"width", h.width}, {"cells", h.cells}}},
                                       {"panels", panels}}));
    out.write_manifest({{"command", "figures"}, {"records", a.records}});
    log("wrote " + std::to_string(panels.size()) + " panels");
    return 0;
}

// run -----------------------------------------------------------------------

int cmd_run(const GlobalOptions& g) {
    const ExperimentConfig cfg = resolve_config(g);
    const PipelineResult r = run_pipeline(cfg, cfg.output_dir);
    for (const auto& w : r.warnings) log("warning: " + w);
    std::cout << dump_json(metrics_report_json(r.metrics));
    return r.reconstruction.converged ? 0 : kExitConvergence;
}

void add_globals(CLI::App* app, GlobalOptions& g) {
    app->add_option("--config", g.config_path, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
    app->add_option("--seed", g.seed, "Override the root seed");
    app->add_option("--out", g.out_dir, "Output directory");
    app->add_option("--cutoff", g.cutoff, "Photon-number cutoff n_max per mode");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synchronized two-photon interference: simulation, tomography and analysis"};
    app.require_subcommand(1);
    GlobalOptions g;

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Forward simulation to homodyne records");
    add_globals(simulate, g);
    simulate->add_option("--events", sim.events, "Number of homodyne events");
    simulate->add_option("--format", sim.format, "Record format")->check(CLI::IsMember({"csv", "jsonl"}));
    simulate->add_option("--state", sim.state, "experiment (full model), sources, hom, hom90 or fock11")
        ->check(CLI::IsMember({"experiment", "sources", "hom", "hom90", "fock11"}));

    TomoArgs tomo_args;
    auto* tomo = app.add_subcommand("tomo", "Maximum-likelihood reconstruction from records");
    add_globals(tomo, g);
    tomo->add_option("--records", tomo_args.records, "Records file (.csv or .jsonl)")->required()->check(CLI::ExistingFile);
    tomo->add_option("--bin-width", tomo_args.bin_width, "Quadrature bin width");
    tomo->add_option("--max-iterations", tomo_args.max_iterations, "Iteration limit");
    tomo->add_option("--tolerance", tomo_args.tolerance, "Per-event log-likelihood gain at convergence");

    WignerArgs wig;
    auto* wigner = app.add_subcommand("wigner", "Two-dimensional slices of the two-mode Wigner function");
    add_globals(wigner, g);
    wigner->add_option("--state", wig.state, "Density-matrix JSON")->required()->check(CLI::ExistingFile);
    wigner->add_option("--plane", wig.planes, "Slice plane as row:col axes, e.g. x1:x2");
    wigner->add_option("--fixed", wig.fixed, "Fixed coordinates, e.g. p1=0");
    wigner->add_option("--lo", wig.lo, "Axis start");
    wigner->add_option("--hi", wig.hi, "Axis end");
    wigner->add_option("--step", wig.step, "Axis step");

    MetricsArgs met;
    auto* metrics = app.add_subcommand("metrics", "Entanglement and interference metrics of a density matrix");
    add_globals(metrics, g);
    metrics->add_option("--state", met.state, "Density-matrix JSON")->required()->check(CLI::ExistingFile);
    metrics->add_option("--records", met.records, "Records the state was reconstructed from")->check(CLI::ExistingFile);
    metrics->add_option("--resamples", met.resamples, "Bootstrap resamples (needs --records)");

    SyncArgs sy;
    auto* sync = app.add_subcommand("sync", "Dual-herald rate and purity versus the synchronization window");
    add_globals(sync, g);
    sync->add_option("--tau-min", sy.tau_lo_us, "Sweep start (us)");
    sync->add_option("--tau-max", sy.tau_hi_us, "Sweep end (us)");
    sync->add_option("--tau-step", sy.tau_step_us, "Sweep step (us)");
    sync->add_option("--total-time", sy.total_time_s, "Simulated wall-clock seconds per point");
    sync->add_flag("--no-dead-time", sy.no_dead_time, "Disable the dead time after a failed window");
    sync->add_flag("--no-gating", sy.no_gating, "Treat measurement time as one contiguous stretch");
    sync->add_option("--model", sy.model, "state_machine or coincidence");
    sync->add_flag("--events", sy.events, "Also write the event log of the widest window");

    ModesArgs mo;
    auto* modes = app.add_subcommand("modes", "Wavepackets, PCA mode estimate and coherence time");
    add_globals(modes, g);
    modes->add_option("--traces", mo.traces, "Synthetic traces for the PCA estimate");
    modes->add_option("--tau-max-ns", mo.tau_max_ns, "Window for the enhancement ratio");
    modes->add_flag("!--no-calibrate", mo.calibrate, "Keep memory 2's wavepacket as configured");

    FiguresArgs fig;
    auto* figures = app.add_subcommand("figures", "Quadrature histogram tables for every phase pair");
    add_globals(figures, g);
    figures->add_option("--records", fig.records, "Records file")->required()->check(CLI::ExistingFile);

    auto* run = app.add_subcommand("run", "End-to-end pipeline with manifest");
    add_globals(run, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate) return cmd_simulate(g, sim);
        if (*tomo) return cmd_tomo(g, tomo_args);
        if (*wigner) return cmd_wigner(g, wig);
        if (*metrics) return cmd_metrics(g, met);
        if (*sync) return cmd_sync(g, sy);
        if (*modes) return cmd_modes(g, mo);
        if (*figures) return cmd_figures(g, fig);
        if (*run) return cmd_run(g);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

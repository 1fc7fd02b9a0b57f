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


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "homsync/config.hpp"
#include "homsync/error.hpp"
#include "homsync/fock.hpp"
#include "homsync/io.hpp"
#include "homsync/metrics.hpp"
#include "homsync/pipeline.hpp"
#include "homsync/quadrature.hpp"
#include "homsync/sync_sim.hpp"
#include "homsync/temporal_modes.hpp"
#include "homsync/tomography.hpp"
#include "homsync/wigner.hpp"

namespace py = pybind11;
using namespace homsync;

namespace {

// Two-mode matrices cross the boundary as dense (d^2 x d^2) complex arrays.
TwoModeState to_state(const CMatrix& rho) {
    const auto n = rho.rows();
    int d = 1;
    while (d * d < n) ++d;
    if (d * d != n || rho.cols() != n) throw ConfigError("density matrix must be (d^2, d^2) for some d");
    return TwoModeState(FockCutoff(d - 1), rho);
}

py::dict metrics_dict(const MetricsValues& v) {
    py::dict out;
    out["log_negativity"] = v.log_negativity;
    out["filtered_log_negativity"] = v.filtered_log_negativity;
    out["postselected_log_negativity"] = v.postselected_log_negativity;
    out["filter_fraction"] = v.filter_fraction;
    out["visibility"] = v.visibility;
    out["cross_correlation"] = v.cross_correlation;
    out["input_purities"] = py::make_tuple(v.input_purity1, v.input_purity2);
    return out;
}

Eigen::MatrixXd records_matrix(const std::vector<QuadratureRecord>& recs) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(recs.size()), 4);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) << recs[i].theta1_deg, recs[i].theta2_deg, recs[i].x1, recs[i].x2;
    }
    return out;
}

std::vector<QuadratureRecord> matrix_records(const Eigen::MatrixXd& m) {
    if (m.cols() != 4) throw ConfigError("records must have columns theta1_deg, theta2_deg, x1, x2");
    std::vector<QuadratureRecord> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = {m(i, 0), m(i, 1), m(i, 2), m(i, 3), 0.0, 0.0};
    return out;
}

SingleModeState diagonal_state(const std::vector<double>& probs, int n_max) {
    return SingleModeState::diagonal(FockCutoff(n_max), probs);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fock-space simulation and homodyne analysis of synchronized two-photon interference";

    auto base = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    (void)base;

    m.def("hom_state", [](int n_max, double theta_rad) { return hom_state(FockCutoff(n_max), theta_rad).rho(); },
          py::arg("n_max") = 5, py::arg("theta_rad") = 0.0);
    m.def("fock_state", [](int n_max, int n1, int n2) { return TwoModeState::fock(FockCutoff(n_max), n1, n2).rho(); },
          py::arg("n_max"), py::arg("n1"), py::arg("n2"));
    m.def("beam_splitter_apply",
          [](const CMatrix& rho, double t) { return beam_splitter_apply(to_state(rho), t).rho(); }, py::arg("rho"),
          py::arg("transmittance") = 0.5);
    m.def("hom_with_overlap",
          [](const std::vector<double>& p1, const std::vector<double>& p2, double overlap, int n_max) {
              return hom_with_overlap(diagonal_state(p1, n_max), diagonal_state(p2, n_max), overlap).rho();
          },
          py::arg("populations1"), py::arg("populations2"), py::arg("overlap"), py::arg("n_max") = 5,
          "Output of two number-diagonal inputs with the given photon-number populations.");

    m.def("log_negativity", [](const CMatrix& rho, int mode) { return log_negativity(to_state(rho), mode_from_int(mode)); },
          py::arg("rho"), py::arg("transposed_mode") = 1);
    m.def("visibility", [](const CMatrix& rho) { return visibility(to_state(rho)); });
    m.def("cross_correlation", [](const CMatrix& rho) { return cross_correlation(to_state(rho)); });
    m.def("input_purity", [](const CMatrix& rho, int mode) { return input_purity_from_output(to_state(rho), mode_from_int(mode)); },
          py::arg("rho"), py::arg("mode"));
    m.def("local_filter", [](const CMatrix& rho) {
        const FilterResult f = local_filter(to_state(rho));
        return py::make_tuple(f.state.rho(), f.success_probability);
    });
    m.def("compute_metrics", [](const CMatrix& rho) { return metrics_dict(compute_metrics(to_state(rho))); });

    m.def("joint_density",
          [](const CMatrix& rho, double t1, double t2, double x1, double x2) {
              return joint_density(to_state(rho), t1, t2, x1, x2);
          },
          py::arg("rho"), py::arg("theta1_deg"), py::arg("theta2_deg"), py::arg("x1"), py::arg("x2"));
    m.def("wigner",
          [](const CMatrix& rho, double x1, double p1, double x2, double p2) {
              return two_mode_wigner(to_state(rho), x1, p1, x2, p2);
          },
          py::arg("rho"), py::arg("x1"), py::arg("p1"), py::arg("x2"), py::arg("p2"));
    m.def("wigner_slice",
          [](const CMatrix& rho, const std::string& row, const std::string& col, double lo, double hi, double step) {
              const SlicePlane plane{parse_axis(row), parse_axis(col), {0.0, 0.0, 0.0, 0.0}};
              const AxisGrid grid{lo, hi, step};
              return wigner_slice(to_state(rho), plane, grid, grid).values;
          },
          py::arg("rho"), py::arg("row") = "x1", py::arg("col") = "x2", py::arg("lo") = -3.0, py::arg("hi") = 3.0,
          py::arg("step") = 0.1, "Slice with the two remaining phase-space coordinates at 0.");

    m.def("sample_records",
          [](const CMatrix& rho, std::size_t n_events, std::uint64_t seed, std::vector<double> phases) {
              PhaseGrid grid{std::move(phases)};
              return records_matrix(sample_records(to_state(rho), grid, n_events, seed));
          },
          py::arg("rho"), py::arg("n_events"), py::arg("seed"),
          py::arg("phases_deg") = std::vector<double>{0.0, 30.0, 60.0, 90.0, 120.0, 150.0},
          "Rows of (theta1_deg, theta2_deg, x1, x2).");
    m.def("reconstruct",
          [](const Eigen::MatrixXd& records, int n_max, double bin_width, int max_iterations, double tolerance) {
              MleOptions opts;
              opts.bin_width = bin_width;
              opts.max_iterations = max_iterations;
              opts.tolerance = tolerance;
              const MleResult r = mle_reconstruct(bin_records(matrix_records(records), bin_width), FockCutoff(n_max), opts);
              py::dict out;
              out["rho"] = r.state.rho();
              out["iterations"] = r.iterations;
              out["converged"] = r.converged;
              out["log_likelihood_per_event"] = r.log_likelihood_per_event;
              out["warnings"] = r.warnings;
              return out;
          },
          py::arg("records"), py::arg("n_max") = 5, py::arg("bin_width") = 0.1, py::arg("max_iterations") = 2000,
          py::arg("tolerance") = 1e-9);

    m.def("analytic_dual_rate",
          [](double r1, double r2, double duty, double tau_us) {
              SyncConfig c;
              c.rate1_cps = r1;
              c.rate2_cps = r2;
              c.duty = duty;
              c.tau_max_us = tau_us;
              return analytic_dual_rate(c);
          },
          py::arg("rate1_cps"), py::arg("rate2_cps"), py::arg("duty"), py::arg("tau_max_us"));
    m.def("simulate_dual_heralds",
          [](const std::string& config_json, std::uint64_t seed) {
              SyncConfig cfg = sync_from_json(nlohmann::json::parse(config_json));
              cfg.seed = seed;
              const SyncResult r = simulate_dual_heralds(cfg);
              Eigen::MatrixXd events(static_cast<Eigen::Index>(r.events.size()), 3);
              for (std::size_t i = 0; i < r.events.size(); ++i) {
                  events.row(static_cast<Eigen::Index>(i)) << r.events[i].release_time_s, r.events[i].storage1_ns,
                      r.events[i].storage2_ns;
              }
              return py::make_tuple(dump_json(sync_summary_json(r.summary, r.warnings)), events);
          },
          py::arg("config_json") = "{}", py::arg("seed") = 1,
          "Returns (summary JSON text, rows of release_time_s, storage1_ns, storage2_ns).");

    m.def("purity_vs_storage",
          [](double p0, double lifetime_ns, double tau_ns) {
              MemoryModel mm;
              mm.initial_purity = p0;
              mm.lifetime_ns = lifetime_ns;
              return purity_vs_storage(mm, tau_ns);
          },
          py::arg("initial_purity"), py::arg("lifetime_ns"), py::arg("tau_ns"));
    m.def("enhancement_factor", &enhancement_factor, py::arg("tau_max_ns"), py::arg("tau_coh_ns"));

    m.def("run_pipeline",
          [](const std::string& config_json, const std::string& out_dir) {
              const PipelineResult r = run_pipeline(config_from_json(nlohmann::json::parse(config_json)), out_dir);
              return dump_json(r.manifest);
          },
          py::arg("config_json"), py::arg("out_dir"), "Runs the full experiment and returns the manifest JSON text.");
}

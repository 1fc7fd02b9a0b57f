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

#include "homsync/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "homsync/error.hpp"

namespace homsync {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const char* kRecordHeader = "theta1_deg,theta2_deg,x1,x2,tau1_ns,tau2_ns";

json record_json(const QuadratureRecord& r) {
    return {{"theta1_deg", r.theta1_deg}, {"theta2_deg", r.theta2_deg}, {"x1", r.x1},
            {"x2", r.x2},                 {"tau1_ns", r.tau1_ns},       {"tau2_ns", r.tau2_ns}};
}

}  // namespace

std::string format_double(double value) {
    if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    const std::string s = strip(text);
    if (s.empty()) throw ConfigError("empty number field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ConfigError("malformed number: " + s);
    return v;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("write failed for " + path.string());
}

std::string sha256_hex(const std::string& content) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(content.data(), content.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string records_to_csv(const std::vector<QuadratureRecord>& records) {
    std::string out = std::string(kRecordHeader) + "\n";
    for (const auto& r : records) {
        out += format_double(r.theta1_deg) + ',' + format_double(r.theta2_deg) + ',' + format_double(r.x1) + ',' +
               format_double(r.x2) + ',' + format_double(r.tau1_ns) + ',' + format_double(r.tau2_ns) + '\n';
    }
    return out;
}

std::string records_to_jsonl(const std::vector<QuadratureRecord>& records) {
    std::string out;
    for (const auto& r : records) out += record_json(r).dump() + "\n";
    return out;
}

std::vector<QuadratureRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || strip(line) != kRecordHeader) {
        throw ConfigError(std::string("record CSV must start with header ") + kRecordHeader);
    }
    std::vector<QuadratureRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw ConfigError("record CSV line " + std::to_string(line_no) + " needs 6 fields");
        out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]),
                       parse_double(f[4]), parse_double(f[5])});
    }
    return out;
}

std::vector<QuadratureRecord> records_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<QuadratureRecord> out;
    while (std::getline(in, line)) {
        if (strip(line).empty()) continue;
        try {
            const json j = json::parse(line);
            out.push_back({j.at("theta1_deg").get<double>(), j.at("theta2_deg").get<double>(),
                           j.at("x1").get<double>(), j.at("x2").get<double>(), j.value("tau1_ns", 0.0),
                           j.value("tau2_ns", 0.0)});
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad record line: ") + e.what());
        }
    }
    return out;
}

std::vector<QuadratureRecord> load_records(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    return path.extension() == ".jsonl" ? records_from_jsonl(text) : records_from_csv(text);
}

json state_to_json(const TwoModeState& state, const json& diagnostics) {
    const auto& rho = state.rho();
    json entries = json::array();
    for (int r = 0; r < rho.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < rho.cols(); ++c) row.push_back({rho(r, c).real(), rho(r, c).imag()});
        entries.push_back(std::move(row));
    }
    return {{"n_max", state.cutoff().n_max()},
            {"basis", "index = n1 * (n_max + 1) + n2"},
            {"rho", std::move(entries)},
            {"diagnostics", diagnostics}};
}

TwoModeState state_from_json(const json& doc) {
    try {
        const FockCutoff cutoff(doc.at("n_max").get<int>());
        const auto& rows = doc.at("rho");
        const int dim = cutoff.two_mode_dim();
        if (static_cast<int>(rows.size()) != dim) throw ConfigError("density matrix has the wrong row count");
        CMatrix rho(dim, dim);
        for (int r = 0; r < dim; ++r) {
            if (static_cast<int>(rows[r].size()) != dim) throw ConfigError("density matrix row has the wrong size");
            for (int c = 0; c < dim; ++c) rho(r, c) = {rows[r][c].at(0).get<double>(), rows[r][c].at(1).get<double>()};
        }
        return TwoModeState(cutoff, std::move(rho));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad density matrix document: ") + e.what());
    }
}

TwoModeState load_state(const std::filesystem::path& path) {
    try {
        return state_from_json(json::parse(read_text_file(path)));
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string wigner_slice_csv(const WignerSlice& slice) {
    std::string out = std::string(axis_name(slice.plane.row_axis)) + "\\" + axis_name(slice.plane.col_axis);
    for (int c = 0; c < slice.values.cols(); ++c) out += ',' + format_double(slice.cols.at(c));
    out += '\n';
    for (int r = 0; r < slice.values.rows(); ++r) {
        out += format_double(slice.rows.at(r));
        for (int c = 0; c < slice.values.cols(); ++c) out += ',' + format_double(slice.values(r, c));
        out += '\n';
    }
    return out;
}

json wigner_slice_metadata(const WignerSlice& slice) {
    json fixed = json::object();
    for (int a = 0; a < 4; ++a) {
        const auto axis = static_cast<PhaseAxis>(a);
        if (axis != slice.plane.row_axis && axis != slice.plane.col_axis) fixed[axis_name(axis)] = slice.plane.fixed[a];
    }
    auto grid = [](const AxisGrid& g) { return json{{"lo", g.lo}, {"hi", g.hi}, {"step", g.step}}; };
    return {{"row_axis", axis_name(slice.plane.row_axis)},
            {"col_axis", axis_name(slice.plane.col_axis)},
            {"fixed", fixed},
            {"rows", grid(slice.rows)},
            {"cols", grid(slice.cols)},
            {"min", {{"value", slice.min_value}, {"row", slice.min_row}, {"col", slice.min_col}}},
            {"max", {{"value", slice.max_value}, {"row", slice.max_row}, {"col", slice.max_col}}}};
}

std::string mode_function_csv(const ModeFunction& mode) {
    std::string out = "t_ns,amplitude\n";
    for (int i = 0; i < mode.size(); ++i) {
        out += format_double(mode.time(i)) + ',' + format_double(mode.samples()[i]) + '\n';
    }
    return out;
}

std::string traces_csv(const Eigen::MatrixXd& traces, double t0, double dt) {
    std::string out = "t_ns";
    for (int c = 0; c < traces.cols(); ++c) out += ',' + format_double(t0 + dt * c);
    out += '\n';
    for (int r = 0; r < traces.rows(); ++r) {
        out += std::to_string(r);
        for (int c = 0; c < traces.cols(); ++c) out += ',' + format_double(traces(r, c));
        out += '\n';
    }
    return out;
}

std::string events_csv(const std::vector<HeraldEvent>& events) {
    std::string out = "release_time_s,storage1_ns,storage2_ns\n";
    for (const auto& e : events) {
        out += format_double(e.release_time_s) + ',' + format_double(e.storage1_ns) + ',' +
               format_double(e.storage2_ns) + '\n';
    }
    return out;
}

json sync_summary_json(const SyncSummary& s, const std::vector<std::string>& warnings) {
    return {{"n_events", s.n_events},
            {"total_time_s", s.total_time_s},
            {"measurement_time_s", s.measurement_time_s},
            {"empirical_rate_cps", s.empirical_rate_cps},
            {"rate_std_error_cps", s.rate_std_error_cps},
            {"analytic_rate_cps", s.analytic_rate_cps},
            {"histogram_bin_ns", s.histogram_bin_ns},
            {"storage_histogram", s.storage_histogram},
            {"warnings", warnings}};
}

json metrics_values_json(const MetricsValues& v) {
    return {{"log_negativity", v.log_negativity},
            {"filtered_log_negativity", v.filtered_log_negativity},
            {"postselected_log_negativity", v.postselected_log_negativity},
            {"filter_fraction", v.filter_fraction},
            {"visibility", v.visibility},
            {"cross_correlation", v.cross_correlation},
            {"input_purities", {v.input_purity1, v.input_purity2}}};
}

json metrics_report_json(const MetricsReport& report) {
    json doc = metrics_values_json(report.values);
    doc["errors"] = report.errors ? metrics_values_json(*report.errors) : json(nullptr);
    doc["bootstrap_resamples"] = report.bootstrap_resamples;
    return doc;
}

QuadratureHistogram quadrature_histogram(const std::vector<QuadratureRecord>& records, double theta1_deg,
                                         double theta2_deg, double lo, double width, int cells) {
    if (!(width > 0.0) || cells <= 0) throw ConfigError("histogram needs positive width and cell count");
    QuadratureHistogram h{theta1_deg, theta2_deg, lo, width, cells, Eigen::MatrixXi::Zero(cells, cells), 0};
    for (const auto& r : records) {
        if (std::abs(r.theta1_deg - theta1_deg) > 1e-9 || std::abs(r.theta2_deg - theta2_deg) > 1e-9) continue;
        const auto i = static_cast<long>(std::floor((r.x1 - lo) / width));
        const auto j = static_cast<long>(std::floor((r.x2 - lo) / width));
        ++h.total;
        if (i < 0 || j < 0 || i >= cells || j >= cells) continue;
        ++h.counts(i, j);
    }
    return h;
}

std::string histogram_csv(const QuadratureHistogram& h) {
    auto center = [&](int i) { return format_double(h.lo + (i + 0.5) * h.width); };
    std::string out = "x1\\x2";
    for (int j = 0; j < h.cells; ++j) out += ',' + center(j);
    out += '\n';
    for (int i = 0; i < h.cells; ++i) {
        out += center(i);
        for (int j = 0; j < h.cells; ++j) out += ',' + std::to_string(h.counts(i, j));
        out += '\n';
    }
    return out;
}

}  // namespace homsync

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

// File formats: CSV tables, JSON documents and content hashes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homsync/fock.hpp"
#include "homsync/metrics.hpp"
#include "homsync/quadrature.hpp"
#include "homsync/sync_sim.hpp"
#include "homsync/temporal_modes.hpp"
#include "homsync/tomography.hpp"
#include "homsync/wigner.hpp"

namespace homsync {

/// Shortest decimal that round-trips (at most 17 significant digits).
std::string format_double(double value);
/// Strict full-string parse; throws ConfigError.
double parse_double(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
/// Writes `content` and creates parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string sha256_hex(const std::string& content);

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& doc);

// Quadrature records: CSV with header theta1_deg,theta2_deg,x1,x2,tau1_ns,tau2_ns
// or JSON lines with the same keys.
std::string records_to_csv(const std::vector<QuadratureRecord>& records);
std::string records_to_jsonl(const std::vector<QuadratureRecord>& records);
std::vector<QuadratureRecord> records_from_csv(const std::string& text);
std::vector<QuadratureRecord> records_from_jsonl(const std::string& text);
/// Picks the format from the extension (.jsonl, otherwise CSV).
std::vector<QuadratureRecord> load_records(const std::filesystem::path& path);

// Density matrices: row-major [re, im] pairs plus free-form diagnostics.
nlohmann::json state_to_json(const TwoModeState& state, const nlohmann::json& diagnostics = nlohmann::json::object());
TwoModeState state_from_json(const nlohmann::json& doc);
TwoModeState load_state(const std::filesystem::path& path);

std::string wigner_slice_csv(const WignerSlice& slice);
nlohmann::json wigner_slice_metadata(const WignerSlice& slice);

std::string mode_function_csv(const ModeFunction& mode);
std::string traces_csv(const Eigen::MatrixXd& traces, double t0, double dt);

std::string events_csv(const std::vector<HeraldEvent>& events);
nlohmann::json sync_summary_json(const SyncSummary& summary, const std::vector<std::string>& warnings);

nlohmann::json metrics_values_json(const MetricsValues& values);
nlohmann::json metrics_report_json(const MetricsReport& report);

/// Counts of (x1, x2) at one phase pair on a square grid [lo, hi) of cells.
struct QuadratureHistogram {
    double theta1_deg = 0.0;
    double theta2_deg = 0.0;
    double lo = -4.0;
    double width = 0.2;
    int cells = 40;
    Eigen::MatrixXi counts;  // x1 rows, x2 columns
    std::int64_t total = 0;
};

QuadratureHistogram quadrature_histogram(const std::vector<QuadratureRecord>& records, double theta1_deg,
                                         double theta2_deg, double lo = -4.0, double width = 0.2, int cells = 40);
/// Header row of x2 cell centers, then one row per x1 cell (center first).
std::string histogram_csv(const QuadratureHistogram& hist);

}  // namespace homsync

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

// End-to-end run: synchronization, storage loss, interference, homodyne
// sampling, reconstruction, metrics and phase-space slices.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homsync/config.hpp"
#include "homsync/metrics.hpp"
#include "homsync/tomography.hpp"
#include "homsync/wigner.hpp"

namespace homsync {

/// Seed of a named stage; stages never share a generator.
std::uint64_t stage_seed(const ExperimentConfig& cfg, const std::string& stage);

/// State of one synchronized event: storage loss on each input, then
/// interference with the configured overlap.
TwoModeState event_state(const ExperimentConfig& cfg, double storage1_ns, double storage2_ns);

struct SimulationResult {
    SyncResult sync;
    /// Event-averaged state the records were drawn from.
    TwoModeState model_state;
    std::size_t distinct_states = 0;
    std::vector<QuadratureRecord> records;
    std::vector<std::string> warnings;
};

/// Forward model up to homodyne records: synchronization, per-event storage
/// loss and interference, sampling over the phase grid.
SimulationResult simulate_experiment(const ExperimentConfig& cfg);

struct PipelineResult {
    /// Event-averaged state the records were drawn from.
    TwoModeState model_state;
    MleResult reconstruction;
    MetricsReport metrics;
    MetricsValues model_metrics;
    std::vector<WignerSlice> slices;
    SyncSummary sync;
    nlohmann::json manifest;
    std::vector<std::string> warnings;
};

/// Runs every stage and writes the artifacts plus manifest.json into
/// `out_dir`. Errors carry the failing stage in their message.
PipelineResult run_pipeline(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Writes `content` under `dir`, recording path, size and SHA-256.
class ArtifactWriter {
   public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& relative, const std::string& content);
    const nlohmann::json& files() const { return files_; }
    /// manifest.json with the recorded files and `extra` fields merged in.
    nlohmann::json write_manifest(nlohmann::json extra);

   private:
    std::filesystem::path dir_;
    nlohmann::json files_ = nlohmann::json::array();
};

}  // namespace homsync

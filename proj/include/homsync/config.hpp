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

// Experiment configuration: one JSON document covering every stage.

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "homsync/fock.hpp"
#include "homsync/quadrature.hpp"
#include "homsync/sync_sim.hpp"
#include "homsync/temporal_modes.hpp"
#include "homsync/tomography.hpp"
#include "homsync/wigner.hpp"

namespace homsync {

inline constexpr int kSchemaVersion = 1;

struct HistogramGrid {
    double lo = -4.0;
    double width = 0.2;
    int cells = 40;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::uint64_t seed = 20260101;
    int n_max = 5;
    SourceModel source1 = SourceModel::from_p1_p2(0.606, 0.03);
    SourceModel source2 = SourceModel::from_p1_p2(0.642, 0.03);
    MemoryModel memory1{0.602, 2300.0};
    MemoryModel memory2{0.637, 1700.0};
    /// Temporal-mode overlap of the synchronized photons.
    double overlap = 0.992;
    /// Overlap used for the control run without synchronization.
    double control_overlap = 0.0;
    /// Apply exp(-storage / lifetime) loss to each stored photon.
    bool storage_loss = true;
    /// Storage times are grouped on this step before building per-event states.
    double storage_quantum_ns = 10.0;
    SyncConfig sync{3200.0, 3200.0, 0.4, 0.4, 5.0, 3600.0};
    PhaseGrid phase_grid;
    std::size_t events = 400000;
    std::size_t control_events = 40000;
    MleOptions mle;
    int bootstrap_resamples = 20;
    double bootstrap_tolerance = 1e-7;
    AxisGrid wigner_grid{-3.0, 3.0, 0.1};
    HistogramGrid histogram;
    std::string output_dir = "out";

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Unknown keys and a wrong schema_version are rejected; missing keys keep
/// their defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json source_to_json(const SourceModel& s);
nlohmann::json memory_to_json(const MemoryModel& m);
nlohmann::json sync_to_json(const SyncConfig& s);
SyncConfig sync_from_json(const nlohmann::json& doc, SyncConfig base = {});
MemoryModel memory_from_json(const nlohmann::json& doc, MemoryModel base = {});

}  // namespace homsync

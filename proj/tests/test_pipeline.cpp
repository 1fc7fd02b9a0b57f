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


#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "homsync/config.hpp"
#include "homsync/error.hpp"
#include "homsync/io.hpp"
#include "homsync/metrics.hpp"
#include "homsync/pipeline.hpp"

using namespace homsync;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.seed = 404;
    cfg.events = 6000;
    cfg.control_events = 2000;
    cfg.sync.total_time_s = 200.0;
    cfg.bootstrap_resamples = 2;
    cfg.mle.max_iterations = 300;
    cfg.wigner_grid = {-2.0, 2.0, 0.5};
    return cfg;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("homsync_pipeline_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Pipeline, StageSeedsDiffer) {
    const ExperimentConfig cfg;
    EXPECT_NE(stage_seed(cfg, "sync"), stage_seed(cfg, "sampling"));
    EXPECT_EQ(stage_seed(cfg, "sync"), stage_seed(cfg, "sync"));
}

TEST(Pipeline, EventStateDecaysWithStorage) {
    ExperimentConfig cfg;
    cfg.overlap = 1.0;
    const double fresh = input_purity_from_output(event_state(cfg, 0.0, 0.0), Mode::kFirst);
    const double stored = input_purity_from_output(event_state(cfg, 500.0, 0.0), Mode::kFirst);
    const double eta = std::exp(-500.0 / 2300.0);
    const double p1 = cfg.source1.p1, p2 = cfg.source1.p2;
    EXPECT_NEAR(fresh, p1, 1e-10);
    EXPECT_NEAR(stored, p1 * eta + 2.0 * p2 * eta * (1.0 - eta), 1e-10);
}

TEST(Pipeline, IdealLimitIsOneBit) {
    ExperimentConfig cfg = small_config();
    cfg.source1 = SourceModel{0.0, 1.0, 0.0};
    cfg.source2 = SourceModel{0.0, 1.0, 0.0};
    cfg.overlap = 1.0;
    cfg.storage_loss = false;
    const SimulationResult sim = simulate_experiment(cfg);
    EXPECT_NEAR(log_negativity(sim.model_state), 1.0, 1e-9);
    EXPECT_EQ(sim.records.size(), cfg.events);
}

TEST(Pipeline, DeterministicArtifactsAndCompleteManifest) {
    const ExperimentConfig cfg = small_config();
    const auto a = scratch("a");
    const auto b = scratch("b");
    const PipelineResult ra = run_pipeline(cfg, a);
    const PipelineResult rb = run_pipeline(cfg, b);
    EXPECT_EQ(read_text_file(a / "manifest.json"), read_text_file(b / "manifest.json"));
    const auto& files = ra.manifest["files"];
    for (const char* name : {"config.json", "records.csv", "state.json", "metrics.json", "mle_log.csv",
                             "sync/events.csv", "wigner/x1_x2.csv", "histograms/control/hist_0_0.csv"}) {
        bool found = false;
        for (const auto& f : files) found = found || f["path"] == name;
        EXPECT_TRUE(found) << name;
    }
    for (const auto& f : files) {
        const std::string text = read_text_file(a / f["path"].get<std::string>());
        EXPECT_EQ(f["sha256"], sha256_hex(text));
        EXPECT_EQ(f["bytes"], text.size());
    }
    EXPECT_LE(ra.metrics.values.filtered_log_negativity, ra.metrics.values.log_negativity + 1e-9);
    EXPECT_TRUE(ra.metrics.errors.has_value());
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(Pipeline, InvalidConfigFailsEarly) {
    ExperimentConfig cfg = small_config();
    cfg.overlap = -0.1;
    EXPECT_THROW(run_pipeline(cfg, scratch("bad")), ConfigError);
}

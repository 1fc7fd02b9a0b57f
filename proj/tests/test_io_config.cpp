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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "homsync/config.hpp"
#include "homsync/error.hpp"
#include "homsync/io.hpp"
#include "test_util.hpp"

using namespace homsync;
using nlohmann::json;

TEST(Io, DoubleRoundTrip) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng) * std::pow(10.0, (i % 40) - 20);
        EXPECT_EQ(parse_double(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(parse_double(format_double(std::numeric_limits<double>::min())), std::numeric_limits<double>::min());
    EXPECT_THROW(parse_double("1.0x"), ConfigError);
    EXPECT_THROW(parse_double(""), ConfigError);
}

TEST(Io, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Io, RecordsRoundTrip) {
    std::vector<QuadratureRecord> recs;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int i = 0; i < 200; ++i) recs.push_back({30.0 * (i % 6), 30.0 * (i % 5), g(rng), g(rng), 10.0 * i, 0.1 * i});
    EXPECT_EQ(records_from_csv(records_to_csv(recs)), recs);
    EXPECT_EQ(records_from_jsonl(records_to_jsonl(recs)), recs);
    EXPECT_THROW(records_from_csv("a,b\n1,2\n"), ConfigError);
}

TEST(Io, RecordsFileFormatFromExtension) {
    const auto dir = std::filesystem::temp_directory_path() / "homsync_io_test";
    std::filesystem::remove_all(dir);
    const std::vector<QuadratureRecord> recs{{0.0, 90.0, 0.25, -1.5, 0.0, 120.0}};
    write_text_file(dir / "a" / "r.jsonl", records_to_jsonl(recs));
    write_text_file(dir / "r.csv", records_to_csv(recs));
    EXPECT_EQ(load_records(dir / "a" / "r.jsonl"), recs);
    EXPECT_EQ(load_records(dir / "r.csv"), recs);
    EXPECT_THROW(read_text_file(dir / "missing.csv"), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST(Io, StateRoundTrip) {
    const TwoModeState s = fixtures::random_two_mode(FockCutoff(4), 4, 21);
    const json doc = state_to_json(s, {{"note", 1}});
    const TwoModeState back = state_from_json(json::parse(dump_json(doc)));
    EXPECT_EQ(back.cutoff().n_max(), 4);
    EXPECT_EQ(fixtures::max_abs_diff(back.rho(), s.rho()), 0.0);
    EXPECT_EQ(doc["diagnostics"]["note"], 1);
    json bad = doc;
    bad["n_max"] = 3;
    EXPECT_THROW(state_from_json(bad), ConfigError);
}

TEST(Io, DumpJsonIsCanonical) {
    EXPECT_EQ(dump_json(json{{"b", 1}, {"a", 2}}), "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}

TEST(Io, HistogramCounts) {
    const std::vector<QuadratureRecord> recs{{0, 0, 0.05, -0.05, 0, 0}, {0, 0, 0.1, 0.3, 0, 0}, {0, 90, 0, 0, 0, 0},
                                             {0, 0, 9.0, 0.0, 0, 0}};
    const QuadratureHistogram h = quadrature_histogram(recs, 0.0, 0.0, -1.0, 0.5, 4);
    EXPECT_EQ(h.total, 3);
    EXPECT_EQ(h.counts.sum(), 2);
    EXPECT_EQ(h.counts(2, 1), 1);
    EXPECT_EQ(h.counts(2, 2), 1);
    const std::string csv = histogram_csv(h);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x1\\x2,-0.75,-0.25,0.25,0.75");
}

TEST(Config, DefaultsRoundTrip) {
    const ExperimentConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    const json doc = config_to_json(cfg);
    EXPECT_EQ(doc["schema_version"], kSchemaVersion);
    const ExperimentConfig back = config_from_json(json::parse(dump_json(doc)));
    EXPECT_EQ(dump_json(config_to_json(back)), dump_json(doc));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    json doc = config_to_json(ExperimentConfig{});
    doc["sed"] = 3;
    EXPECT_THROW(config_from_json(doc), ConfigError);
    doc = config_to_json(ExperimentConfig{});
    doc["sync"]["tau_max"] = 1.0;
    EXPECT_THROW(config_from_json(doc), ConfigError);
    doc = config_to_json(ExperimentConfig{});
    doc["schema_version"] = kSchemaVersion + 1;
    EXPECT_THROW(config_from_json(doc), ConfigError);
    doc = config_to_json(ExperimentConfig{});
    doc["overlap"] = 1.5;
    EXPECT_THROW(config_from_json(doc), ConfigError);
    doc = config_to_json(ExperimentConfig{});
    doc["n_max"] = "five";
    EXPECT_THROW(config_from_json(doc), ConfigError);
}

TEST(Config, PartialDocumentKeepsDefaults) {
    const ExperimentConfig cfg = config_from_json(json{{"seed", 5}, {"events", 1000}});
    EXPECT_EQ(cfg.seed, 5u);
    EXPECT_EQ(cfg.events, 1000u);
    EXPECT_EQ(cfg.n_max, 5);
    EXPECT_DOUBLE_EQ(cfg.overlap, 0.992);
}

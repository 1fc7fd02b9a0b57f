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

#include "homsync/config.hpp"

#include <set>

#include "homsync/error.hpp"
#include "homsync/io.hpp"

namespace homsync {
namespace {

using nlohmann::json;

// Reads fields of one JSON object, keeping defaults for absent keys and
// rejecting keys nobody asked for.
class ObjectReader {
   public:
    ObjectReader(const json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
        if (!doc_.is_object()) throw ConfigError(where_ + " must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        const auto it = doc_.find(key);
        if (it == doc_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(where_ + "." + key + " has the wrong type");
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        const auto it = doc_.find(key);
        return it == doc_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (const auto& [key, value] : doc_.items()) {
            if (!seen_.count(key)) throw ConfigError("unknown key " + where_ + "." + key);
        }
    }

   private:
    const json& doc_;
    std::string where_;
    std::set<std::string> seen_;
};

SourceModel source_from_json(const json& doc, SourceModel base, const std::string& where) {
    ObjectReader r(doc, where);
    r.get("p0", base.p0);
    r.get("p1", base.p1);
    r.get("p2", base.p2);
    r.finish();
    return base;
}

const char* model_name(SyncModel m) { return m == SyncModel::kStateMachine ? "state_machine" : "coincidence"; }

}  // namespace

json source_to_json(const SourceModel& s) { return {{"p0", s.p0}, {"p1", s.p1}, {"p2", s.p2}}; }

json memory_to_json(const MemoryModel& m) {
    return {{"initial_purity", m.initial_purity},
            {"lifetime_ns", m.lifetime_ns},
            {"release_delay_ns", m.release_delay_ns},
            {"gamma_rise", m.gamma_rise},
            {"gamma_fall", m.gamma_fall}};
}

MemoryModel memory_from_json(const json& doc, MemoryModel base) {
    ObjectReader r(doc, "memory");
    r.get("initial_purity", base.initial_purity);
    r.get("lifetime_ns", base.lifetime_ns);
    r.get("release_delay_ns", base.release_delay_ns);
    r.get("gamma_rise", base.gamma_rise);
    r.get("gamma_fall", base.gamma_fall);
    r.finish();
    return base;
}

json sync_to_json(const SyncConfig& s) {
    json doc = {{"rate1_cps", s.rate1_cps},
                {"rate2_cps", s.rate2_cps},
                {"duty", s.duty},
                {"tau_max_us", s.tau_max_us},
                {"dead_time_us", s.dead_time_us},
                {"total_time_s", s.total_time_s},
                {"dead_time_enabled", s.dead_time_enabled},
                {"duty_gating", s.duty_gating},
                {"switching_rate_hz", s.switching_rate_hz},
                {"quantization_ns", s.quantization_ns},
                {"model", model_name(s.model)}};
    if (s.seed1) doc["seed1"] = *s.seed1;
    if (s.seed2) doc["seed2"] = *s.seed2;
    return doc;
}

SyncConfig sync_from_json(const json& doc, SyncConfig base) {
    ObjectReader r(doc, "sync");
    r.get("rate1_cps", base.rate1_cps);
    r.get("rate2_cps", base.rate2_cps);
    r.get("duty", base.duty);
    r.get("tau_max_us", base.tau_max_us);
    r.get("dead_time_us", base.dead_time_us);
    r.get("total_time_s", base.total_time_s);
    r.get("dead_time_enabled", base.dead_time_enabled);
    r.get("duty_gating", base.duty_gating);
    r.get("switching_rate_hz", base.switching_rate_hz);
    r.get("quantization_ns", base.quantization_ns);
    std::uint64_t seed = 0;
    if (const json* s1 = r.child("seed1")) {
        r.get("seed1", seed);
        base.seed1 = seed;
    }
    if (const json* s2 = r.child("seed2")) {
        r.get("seed2", seed);
        base.seed2 = seed;
    }
    std::string model = model_name(base.model);
    r.get("model", model);
    if (model == "state_machine") {
        base.model = SyncModel::kStateMachine;
    } else if (model == "coincidence") {
        base.model = SyncModel::kCoincidence;
    } else {
        throw ConfigError("sync.model must be state_machine or coincidence");
    }
    r.finish();
    return base;
}

void ExperimentConfig::validate() const {
    if (schema_version != kSchemaVersion) throw ConfigError("unsupported schema_version");
    FockCutoff{n_max};
    source1.validate();
    source2.validate();
    memory1.validate();
    memory2.validate();
    if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConfigError("overlap must lie in [0, 1]");
    if (!(control_overlap >= 0.0 && control_overlap <= 1.0)) throw ConfigError("control_overlap must lie in [0, 1]");
    if (!(storage_quantum_ns > 0.0)) throw ConfigError("storage_quantum_ns must be positive");
    sync.validate();
    phase_grid.validate();
    if (events == 0) throw ConfigError("events must be positive");
    if (control_events == 0) throw ConfigError("control_events must be positive");
    mle.validate();
    if (bootstrap_resamples != 0 && bootstrap_resamples < 2) {
        throw ConfigError("bootstrap_resamples must be 0 or at least 2");
    }
    if (!(bootstrap_tolerance > 0.0)) throw ConfigError("bootstrap_tolerance must be positive");
    wigner_grid.validate();
    if (!(histogram.width > 0.0) || histogram.cells <= 0) throw ConfigError("histogram grid must be non-empty");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig cfg;
    ObjectReader r(doc, "config");
    r.get("schema_version", cfg.schema_version);
    if (cfg.schema_version != kSchemaVersion) {
        throw ConfigError("schema_version " + std::to_string(cfg.schema_version) + " is not supported (expected " +
                          std::to_string(kSchemaVersion) + ")");
    }
    r.get("seed", cfg.seed);
    r.get("n_max", cfg.n_max);
    if (const json* s = r.child("sources")) {
        if (!s->is_array() || s->size() != 2) throw ConfigError("sources must hold two entries");
        cfg.source1 = source_from_json((*s)[0], cfg.source1, "sources[0]");
        cfg.source2 = source_from_json((*s)[1], cfg.source2, "sources[1]");
    }
    if (const json* m = r.child("memories")) {
        if (!m->is_array() || m->size() != 2) throw ConfigError("memories must hold two entries");
        cfg.memory1 = memory_from_json((*m)[0], cfg.memory1);
        cfg.memory2 = memory_from_json((*m)[1], cfg.memory2);
    }
    r.get("overlap", cfg.overlap);
    r.get("control_overlap", cfg.control_overlap);
    r.get("storage_loss", cfg.storage_loss);
    r.get("storage_quantum_ns", cfg.storage_quantum_ns);
    if (const json* s = r.child("sync")) cfg.sync = sync_from_json(*s, cfg.sync);
    r.get("phases_deg", cfg.phase_grid.phases_deg);
    r.get("events", cfg.events);
    r.get("control_events", cfg.control_events);
    if (const json* m = r.child("mle")) {
        ObjectReader mr(*m, "mle");
        mr.get("max_iterations", cfg.mle.max_iterations);
        mr.get("tolerance", cfg.mle.tolerance);
        mr.get("bin_width", cfg.mle.bin_width);
        mr.get("dilution", cfg.mle.dilution);
        mr.finish();
    }
    if (const json* b = r.child("bootstrap")) {
        ObjectReader br(*b, "bootstrap");
        br.get("resamples", cfg.bootstrap_resamples);
        br.get("tolerance", cfg.bootstrap_tolerance);
        br.finish();
    }
    if (const json* w = r.child("wigner_grid")) {
        ObjectReader wr(*w, "wigner_grid");
        wr.get("lo", cfg.wigner_grid.lo);
        wr.get("hi", cfg.wigner_grid.hi);
        wr.get("step", cfg.wigner_grid.step);
        wr.finish();
    }
    if (const json* h = r.child("histogram")) {
        ObjectReader hr(*h, "histogram");
        hr.get("lo", cfg.histogram.lo);
        hr.get("width", cfg.histogram.width);
        hr.get("cells", cfg.histogram.cells);
        hr.finish();
    }
    r.get("output_dir", cfg.output_dir);
    r.finish();
    cfg.validate();
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json sync = sync_to_json(cfg.sync);
    return {{"schema_version", cfg.schema_version},
            {"seed", cfg.seed},
            {"n_max", cfg.n_max},
            {"sources", {source_to_json(cfg.source1), source_to_json(cfg.source2)}},
            {"memories", {memory_to_json(cfg.memory1), memory_to_json(cfg.memory2)}},
            {"overlap", cfg.overlap},
            {"control_overlap", cfg.control_overlap},
            {"storage_loss", cfg.storage_loss},
            {"storage_quantum_ns", cfg.storage_quantum_ns},
            {"sync", sync},
            {"phases_deg", cfg.phase_grid.phases_deg},
            {"events", cfg.events},
            {"control_events", cfg.control_events},
            {"mle",
             {{"max_iterations", cfg.mle.max_iterations},
              {"tolerance", cfg.mle.tolerance},
              {"bin_width", cfg.mle.bin_width},
              {"dilution", cfg.mle.dilution}}},
            {"bootstrap", {{"resamples", cfg.bootstrap_resamples}, {"tolerance", cfg.bootstrap_tolerance}}},
            {"wigner_grid", {{"lo", cfg.wigner_grid.lo}, {"hi", cfg.wigner_grid.hi}, {"step", cfg.wigner_grid.step}}},
            {"histogram",
             {{"lo", cfg.histogram.lo}, {"width", cfg.histogram.width}, {"cells", cfg.histogram.cells}}},
            {"output_dir", cfg.output_dir}};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    try {
        return config_from_json(json::parse(read_text_file(path)));
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace homsync

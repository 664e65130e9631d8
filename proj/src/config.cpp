// Copyright 2026 The dipeq Authors
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

#include "dipeq/config.hpp"

#include <initializer_list>

#include "dipeq/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace dipeq {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw Error("config: " + where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw Error("config: unknown key '" + where + "." + k + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, const std::string& where, T* out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error("config: '" + where + "." + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config: ") + e.what());
  }
  RunConfig c;
  only_keys(j, "", {"seed", "search", "anchor", "agent", "play", "dataset"});
  read(j, "seed", "", &c.seed);
  if (j.contains("search")) {
    const json& s = j["search"];
    only_keys(s, "search", {"iterations", "candidates", "max_per_unit", "beta", "nash_explore",
                            "rollouts", "horizon"});
    read(s, "iterations", "search", &c.search.iterations);
    read(s, "candidates", "search", &c.search.n_candidates);
    read(s, "max_per_unit", "search", &c.search.max_per_unit);
    read(s, "beta", "search", &c.search.beta);
    read(s, "nash_explore", "search", &c.search.nash_explore);
    read(s, "rollouts", "search", &c.search.rollouts);
    read(s, "horizon", "search", &c.search.horizon);
  }
  if (j.contains("anchor")) {
    const json& a = j["anchor"];
    only_keys(a, "anchor", {"kind", "floor", "table", "onto_center", "toward_center",
                            "support_own", "temperature"});
    std::string kind = "heuristic";
    read(a, "kind", "anchor", &kind);
    if (kind == "uniform") {
      c.anchor.kind = AnchorKind::kUniform;
    } else if (kind == "heuristic") {
      c.anchor.kind = AnchorKind::kHeuristic;
    } else if (kind == "table") {
      c.anchor.kind = AnchorKind::kTable;
    } else {
      throw Error("config: anchor.kind must be uniform, heuristic or table");
    }
    read(a, "floor", "anchor", &c.anchor.floor);
    read(a, "table", "anchor", &c.anchor.table_path);
    read(a, "onto_center", "anchor", &c.anchor.weights.onto_center);
    read(a, "toward_center", "anchor", &c.anchor.weights.toward_center);
    read(a, "support_own", "anchor", &c.anchor.weights.support_own);
    read(a, "temperature", "anchor", &c.anchor.weights.temperature);
    if (c.anchor.kind == AnchorKind::kTable && c.anchor.table_path.empty()) {
      throw Error("config: anchor.table is required for the table kind");
    }
  }
  if (j.contains("agent")) {
    const json& a = j["agent"];
    only_keys(a, "agent", {"act", "search_all_powers"});
    std::string act = "sample";
    read(a, "act", "agent", &act);
    if (act == "argmax") {
      c.act = ActMode::kArgmax;
    } else if (act == "sample") {
      c.act = ActMode::kSample;
    } else {
      throw Error("config: agent.act must be argmax or sample");
    }
    read(a, "search_all_powers", "agent", &c.search_all_powers);
  }
  if (j.contains("play")) {
    only_keys(j["play"], "play", {"max_year"});
    read(j["play"], "max_year", "play", &c.play.max_year);
  }
  if (j.contains("dataset")) {
    only_keys(j["dataset"], "dataset", {"max_year", "max_chars"});
    read(j["dataset"], "max_year", "dataset", &c.dataset_max_year);
    read(j["dataset"], "max_chars", "dataset", &c.emit.max_chars);
  }
  if (!(c.anchor.floor >= 0.0 && c.anchor.floor <= 1.0)) {
    throw Error("config: anchor.floor must be in [0, 1]");
  }
  if (!(c.anchor.weights.temperature > 0.0)) throw Error("config: anchor.temperature must be > 0");
  c.search.validate();
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(text::read_file(path)); }

AnchorPolicy make_anchor(const AnchorSettings& s) {
  switch (s.kind) {
    case AnchorKind::kUniform: return AnchorPolicy::uniform(s.floor);
    case AnchorKind::kHeuristic: return AnchorPolicy::heuristic(s.weights, s.floor);
    case AnchorKind::kTable:
      return AnchorPolicy::table(std::make_shared<const AnchorTable>(AnchorTable::load(s.table_path)),
                                 s.floor);
  }
  throw Error("unknown anchor kind");
}

}  // namespace dipeq

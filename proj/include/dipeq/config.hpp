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

// JSON run configuration shared by the command-line tools.

#ifndef DIPEQ_CONFIG_HPP
#define DIPEQ_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "dipeq/anchor.hpp"
#include "dipeq/dataset.hpp"
#include "dipeq/eval.hpp"
#include "dipeq/search.hpp"

namespace dipeq {

struct AnchorSettings {
  AnchorKind kind = AnchorKind::kHeuristic;
  double floor = AnchorPolicy::kDefaultFloor;
  HeuristicWeights weights;
  std::string table_path;  // table kind only
};

struct RunConfig {
  std::uint64_t seed = 0;
  SearchConfig search;
  AnchorSettings anchor;
  ActMode act = ActMode::kSample;
  bool search_all_powers = false;
  PlayConfig play;
  int dataset_max_year = 0;
  EmitOptions emit;
};

// Unknown keys and wrongly typed values are errors; absent keys keep the
// defaults above. The key set is listed in docs/formats.md.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

AnchorPolicy make_anchor(const AnchorSettings& settings);

}  // namespace dipeq

#endif  // DIPEQ_CONFIG_HPP

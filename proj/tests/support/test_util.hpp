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

#ifndef DIPEQ_TESTS_TEST_UTIL_HPP
#define DIPEQ_TESTS_TEST_UTIL_HPP

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dipeq/map.hpp"
#include "dipeq/orders.hpp"
#include "dipeq/rng.hpp"
#include "dipeq/state.hpp"

namespace dipeq::testing {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out(1);
  for (char c : s) {
    if (c == sep) {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

inline std::string data_path(const std::string& rel) { return data_dir() + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::shared_ptr<const MapSpec> map_named(const std::string& name) {
  return std::make_shared<const MapSpec>(load_map_file(resolve_map_path(name)));
}

// Tab-separated rows, skipping blank lines and '#' comments.
inline std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split(line, '\t'));
  }
  return rows;
}

// Up to `max_units` units on distinct provinces with random owners and
// kinds, in a move phase. Centers keep their starting owners.
inline GameState random_position(std::shared_ptr<const MapSpec> map, int max_units, Rng& rng) {
  const MapSpec& m = *map;
  GameState s = initial_state(map);
  s.units.clear();
  s.last_orders.assign(m.num_powers(), {});
  s.phase = rng.bernoulli(0.5) ? Phase::kSpringMove : Phase::kFallMove;
  std::vector<int> provinces(m.num_provinces());
  for (int p = 0; p < m.num_provinces(); ++p) provinces[p] = p;
  for (int i = m.num_provinces() - 1; i > 0; --i) {
    std::swap(provinces[i], provinces[rng.below(i + 1)]);
  }
  const int want = 1 + static_cast<int>(rng.below(max_units));
  for (int p : provinces) {
    if (static_cast<int>(s.units.size()) == want) break;
    std::vector<PlacedUnit> options;
    for (Loc l = 0; l < m.num_locations(); ++l) {
      if (m.province_of(l) != p) continue;
      for (UnitKind k : {UnitKind::kArmy, UnitKind::kFleet}) {
        if (m.can_occupy(k, l)) options.push_back({kNeutral, k, l});
      }
    }
    if (options.empty()) continue;
    PlacedUnit u = options[rng.below(options.size())];
    u.owner = static_cast<PowerId>(rng.below(m.num_powers()));
    s.units.push_back(u);
  }
  s.sort_units();
  return s;
}

// One uniformly drawn legal order per unit, grouped by power.
inline std::vector<JointAction> random_orders(const GameState& s, Rng& rng) {
  std::vector<JointAction> joints(s.map->num_powers());
  for (PowerId p = 0; p < s.map->num_powers(); ++p) joints[p].power = p;
  for (int i = 0; i < static_cast<int>(s.units.size()); ++i) {
    auto legal = legal_unit_orders(s, i);
    joints[s.units[i].owner].orders.push_back(legal[rng.below(legal.size())]);
  }
  return joints;
}

}  // namespace dipeq::testing

#endif  // DIPEQ_TESTS_TEST_UTIL_HPP

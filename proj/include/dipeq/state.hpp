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

#ifndef DIPEQ_STATE_HPP
#define DIPEQ_STATE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dipeq/map.hpp"
#include "dipeq/order.hpp"

namespace dipeq {

enum class Phase : std::uint8_t {
  kSpringMove,
  kSpringRetreat,
  kFallMove,
  kFallRetreat,
  kWinterAdjust,
};

const char* phase_name(Phase phase);
std::optional<Phase> phase_from_name(std::string_view name);  // "spring_move"
bool is_move_phase(Phase phase);
bool is_retreat_phase(Phase phase);

using Unit = PlacedUnit;

struct DislodgedUnit {
  Unit unit;
  int attacker_origin = -1;  // province
  std::vector<Loc> retreats;  // sorted
  friend bool operator==(const DislodgedUnit&, const DislodgedUnit&) = default;
};

struct GameState {
  std::shared_ptr<const MapSpec> map;
  int year = 1901;
  Phase phase = Phase::kSpringMove;
  std::vector<Unit> units;  // canonical order: province id
  // Per province; kNeutral for neutral centers and for non-centers.
  std::vector<PowerId> sc_owner;
  std::vector<DislodgedUnit> dislodged;
  // Orders of the most recent movement phase, per power, for text encoding.
  std::vector<std::vector<Order>> last_orders;

  // Unit index per province, -1 if empty.
  std::vector<int> occupancy() const;
  int unit_at(int province) const;
  int sc_count(PowerId power) const;
  std::vector<int> sc_counts() const;
  int unit_count(PowerId power) const;
  void sort_units();
};

bool operator==(const Unit& a, const Unit& b);

GameState initial_state(std::shared_ptr<const MapSpec> map);

// Checks the GameState invariants; throws InvariantError.
void check_invariants(const GameState& state);

// Canonical line format (docs/formats.md). The map is referenced by the
// `map` line and resolved through resolve_map_path().
std::string serialize_state(const GameState& state, bool include_last_orders = true);
// `map` lines are ignored; the caller supplies the board.
GameState parse_state(std::string_view text, std::shared_ptr<const MapSpec> map);
// Reads a state file whose `map` line names the board.
GameState load_state_file(const std::string& path);

// FNV-1a 64 over the serialization without last orders.
std::uint64_t state_hash(const GameState& state);
std::string hash_hex(std::uint64_t h);

// Bundled map names ("standard", "ring7") resolve under the data
// directory; anything else is a path.
std::string resolve_map_path(const std::string& name_or_path);
std::string data_dir();

}  // namespace dipeq

#endif  // DIPEQ_STATE_HPP

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

#ifndef DIPEQ_MAP_HPP
#define DIPEQ_MAP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dipeq {

enum class Terrain : std::uint8_t { kLand, kWater, kCoast };
enum class UnitKind : std::uint8_t { kArmy, kFleet };

// Index into MapSpec::powers(). kNeutral marks unowned centers.
using PowerId = int;
inline constexpr PowerId kNeutral = -1;

// Index into the location table. Locations [0, num_provinces()) are the
// provinces themselves; split-coast sub-locations follow.
using Loc = int;
inline constexpr Loc kNoLoc = -1;

struct CoastSpec {
  std::string code;  // "NC"
  std::string name;  // "North"
  std::vector<std::string> fleet_adjacent;
};

struct ProvinceSpec {
  std::string id;
  std::string long_name;
  Terrain terrain = Terrain::kLand;
  bool is_supply_center = false;
  std::optional<std::string> home_of;
  std::vector<std::string> army_adjacent;
  // Empty for split-coast provinces: their coasts carry the fleet edges.
  std::vector<std::string> fleet_adjacent;
  std::vector<CoastSpec> coasts;
};

struct StartUnit {
  std::string power;
  UnitKind kind = UnitKind::kArmy;
  std::string location;
};

// Raw, unvalidated contents of a map document.
struct MapDefinition {
  std::vector<std::string> powers;
  std::vector<ProvinceSpec> provinces;
  std::vector<StartUnit> start_units;
  // Province id -> power name or "neutral". Home centers default to their
  // home power; everything else defaults to neutral.
  std::vector<std::pair<std::string, std::string>> owner_overrides;
};

struct LocationInfo {
  std::string id;       // "STP" or "STP/NC"
  std::string display;  // "St. Petersburg" or "St. Petersburg's North Coast"
  int province = 0;
  int coast = -1;  // index into ProvinceSpec::coasts, -1 for the province
};

struct PlacedUnit {
  PowerId owner = kNeutral;
  UnitKind kind = UnitKind::kArmy;
  Loc loc = kNoLoc;
};

// Validated, indexed board. Immutable after construction.
class MapSpec {
 public:
  // Validates every invariant; throws InvariantError naming the offending
  // province or edge.
  static MapSpec build(MapDefinition definition);

  const std::vector<ProvinceSpec>& provinces() const { return provinces_; }
  const ProvinceSpec& province(int p) const { return provinces_[p]; }
  const std::vector<std::string>& powers() const { return powers_; }
  const std::string& power_name(PowerId p) const { return powers_[p]; }
  const std::vector<PlacedUnit>& start_units() const { return start_units_; }
  const std::vector<PowerId>& start_sc_owner() const { return start_owner_; }

  int num_provinces() const { return static_cast<int>(provinces_.size()); }
  int num_locations() const { return static_cast<int>(locations_.size()); }
  int num_powers() const { return static_cast<int>(powers_.size()); }
  const LocationInfo& location(Loc loc) const { return locations_[loc]; }
  int province_of(Loc loc) const { return locations_[loc].province; }

  std::optional<Loc> find_location(std::string_view id) const;
  // Matches a display name ("Mid Atlantic Ocean", "Spain's North Coast").
  std::optional<Loc> find_by_name(std::string_view name) const;
  std::optional<PowerId> find_power(std::string_view name) const;

  bool is_supply_center(int province) const {
    return provinces_[province].is_supply_center;
  }
  PowerId home_power(int province) const { return home_power_[province]; }
  const std::vector<int>& supply_centers() const { return supply_centers_; }
  int total_supply_centers() const {
    return static_cast<int>(supply_centers_.size());
  }
  // Majority control: floor(total / 2) + 1 (18 of 34 on the standard map).
  int win_threshold() const { return total_supply_centers() / 2 + 1; }

  bool has_coasts(int province) const {
    return !provinces_[province].coasts.empty();
  }
  // Whether a unit of this kind may stand on the location.
  bool can_occupy(UnitKind kind, Loc loc) const;
  const std::vector<Loc>& adjacent(UnitKind kind, Loc loc) const {
    return kind == UnitKind::kArmy ? army_adj_[loc] : fleet_adj_[loc];
  }
  bool adjacent_to(UnitKind kind, Loc from, Loc to) const;
  // Whether a unit at `from` could move into some location of `province`.
  bool reaches(UnitKind kind, Loc from, int province) const {
    return reach_[static_cast<int>(kind)][from][province] != 0;
  }
  // Fewest kind-legal moves from `from` into `province`; kUnreachable if
  // none.
  int distance(UnitKind kind, Loc from, int province) const {
    return dist_[static_cast<int>(kind)][from * num_provinces() + province];
  }
  // Shortest path over the union of army and fleet edges between provinces.
  int any_distance(int from, int to) const {
    return any_dist_[from * num_provinces() + to];
  }
  static constexpr int kUnreachable = 1 << 20;

  // Rank of the location's display name among all display names; sorting
  // by it reproduces alphabetical order of the verbose text.
  int name_rank(Loc loc) const { return name_rank_[loc]; }
  // Rank of the province id among all ids; the canonical unit order.
  int id_rank(int province) const { return id_rank_[province]; }

 private:
  MapSpec() = default;
  void index();

  std::vector<std::string> powers_;
  std::vector<ProvinceSpec> provinces_;
  std::vector<LocationInfo> locations_;
  std::vector<PlacedUnit> start_units_;
  std::vector<PowerId> start_owner_;
  std::vector<PowerId> home_power_;
  std::vector<int> supply_centers_;
  std::vector<std::vector<Loc>> army_adj_;
  std::vector<std::vector<Loc>> fleet_adj_;
  std::vector<std::vector<char>> reach_[2];
  std::vector<int> dist_[2];
  std::vector<int> any_dist_;
  std::vector<int> name_rank_;
  std::vector<int> id_rank_;
  std::unordered_map<std::string, Loc> by_id_;
  std::unordered_map<std::string, Loc> by_name_;
};

// Parses the plain-text map format documented in docs/map_format.md.
// Throws SyntaxError (with position) or InvariantError.
MapDefinition parse_map_definition(std::string_view text);
MapSpec load_map(std::string_view text);
MapSpec load_map_file(const std::string& path);

const char* terrain_name(Terrain terrain);
char unit_letter(UnitKind kind);           // 'A' / 'F'
const char* unit_word(UnitKind kind);      // "army" / "fleet"

}  // namespace dipeq

#endif  // DIPEQ_MAP_HPP

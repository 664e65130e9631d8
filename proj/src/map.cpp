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

#include "dipeq/map.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "dipeq/error.hpp"
#include "text_util.hpp"

namespace dipeq {

namespace {

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (!(std::isupper(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)))) {
      return false;
    }
  }
  return true;
}

enum class Section { kNone, kPowers, kProvinces, kCoasts, kArmy, kFleet, kStart, kOwners };

Section section_from(const std::string& name) {
  if (name == "[powers]") return Section::kPowers;
  if (name == "[provinces]") return Section::kProvinces;
  if (name == "[coasts]") return Section::kCoasts;
  if (name == "[army]") return Section::kArmy;
  if (name == "[fleet]") return Section::kFleet;
  if (name == "[start]") return Section::kStart;
  if (name == "[owners]") return Section::kOwners;
  return Section::kNone;
}

// "STP/NC" -> ("STP", "NC"); "STP" -> ("STP", "").
std::pair<std::string, std::string> split_loc(std::string_view id) {
  auto slash = id.find('/');
  if (slash == std::string_view::npos) return {std::string(id), ""};
  return {std::string(id.substr(0, slash)), std::string(id.substr(slash + 1))};
}

}  // namespace

const char* terrain_name(Terrain terrain) {
  switch (terrain) {
    case Terrain::kLand: return "land";
    case Terrain::kWater: return "water";
    case Terrain::kCoast: return "coast";
  }
  return "?";
}

char unit_letter(UnitKind kind) { return kind == UnitKind::kArmy ? 'A' : 'F'; }

const char* unit_word(UnitKind kind) {
  return kind == UnitKind::kArmy ? "army" : "fleet";
}

MapDefinition parse_map_definition(std::string_view doc) {
  MapDefinition def;
  Section section = Section::kNone;
  std::unordered_map<std::string, std::size_t> index;

  auto province_for = [&](const text::Line& line, std::size_t tok,
                          const std::string& id) -> ProvinceSpec& {
    auto it = index.find(id);
    if (it == index.end()) text::syntax_error(line, tok, "unknown province '" + id + "'");
    return def.provinces[it->second];
  };

  for (const text::Line& line : text::split_lines(doc)) {
    const auto& t = line.tokens;
    if (t[0].text.front() == '[') {
      section = section_from(t[0].text);
      if (section == Section::kNone || t.size() != 1) {
        text::syntax_error(line, 0, "unknown section header '" + t[0].text + "'");
      }
      continue;
    }
    switch (section) {
      case Section::kNone:
        text::syntax_error(line, 0, "content before the first section header");
      case Section::kPowers:
        for (const auto& tok : t) def.powers.push_back(tok.text);
        break;
      case Section::kProvinces: {
        if (t.size() < 5) {
          text::syntax_error(line, t.size(),
                             "expected '<ID> <terrain> <sc|-> <home|-> <long name>'");
        }
        ProvinceSpec p;
        p.id = t[0].text;
        if (!valid_id(p.id)) text::syntax_error(line, 0, "invalid province id '" + p.id + "'");
        if (t[1].text == "land") {
          p.terrain = Terrain::kLand;
        } else if (t[1].text == "water") {
          p.terrain = Terrain::kWater;
        } else if (t[1].text == "coast") {
          p.terrain = Terrain::kCoast;
        } else {
          text::syntax_error(line, 1, "terrain must be land, water or coast");
        }
        if (t[2].text == "sc") {
          p.is_supply_center = true;
        } else if (t[2].text != "-") {
          text::syntax_error(line, 2, "expected 'sc' or '-'");
        }
        if (t[3].text != "-") p.home_of = t[3].text;
        p.long_name = text::rest_of_line(line, 4);
        if (index.count(p.id)) {
          text::syntax_error(line, 0, "duplicate province id '" + p.id + "'");
        }
        index[p.id] = def.provinces.size();
        def.provinces.push_back(std::move(p));
        break;
      }
      case Section::kCoasts: {
        if (t.size() < 2) text::syntax_error(line, t.size(), "expected '<ID>/<CODE> <name>'");
        auto [prov, code] = split_loc(t[0].text);
        if (code.empty() || !valid_id(code)) {
          text::syntax_error(line, 0, "coast must be written <ID>/<CODE>");
        }
        ProvinceSpec& p = province_for(line, 0, prov);
        for (const auto& c : p.coasts) {
          if (c.code == code) text::syntax_error(line, 0, "duplicate coast " + t[0].text);
        }
        p.coasts.push_back({code, text::rest_of_line(line, 1), {}});
        break;
      }
      case Section::kArmy:
      case Section::kFleet: {
        if (t[0].text.back() != ':') text::syntax_error(line, 0, "expected '<LOC>:'");
        std::string key = t[0].text.substr(0, t[0].text.size() - 1);
        auto [prov, code] = split_loc(key);
        ProvinceSpec& p = province_for(line, 0, prov);
        std::vector<std::string>* list = nullptr;
        if (section == Section::kArmy) {
          if (!code.empty()) text::syntax_error(line, 0, "army edges use province ids");
          list = &p.army_adjacent;
        } else if (code.empty()) {
          list = &p.fleet_adjacent;
        } else {
          for (auto& c : p.coasts) {
            if (c.code == code) list = &c.fleet_adjacent;
          }
          if (!list) text::syntax_error(line, 0, "unknown coast '" + key + "'");
        }
        for (std::size_t i = 1; i < t.size(); ++i) list->push_back(t[i].text);
        break;
      }
      case Section::kStart: {
        if (t.size() != 3) text::syntax_error(line, t.size(), "expected '<Power> A|F <LOC>'");
        StartUnit u;
        u.power = t[0].text;
        if (t[1].text == "A") {
          u.kind = UnitKind::kArmy;
        } else if (t[1].text == "F") {
          u.kind = UnitKind::kFleet;
        } else {
          text::syntax_error(line, 1, "unit kind must be A or F");
        }
        u.location = t[2].text;
        def.start_units.push_back(std::move(u));
        break;
      }
      case Section::kOwners:
        if (t.size() != 2) text::syntax_error(line, t.size(), "expected '<ID> <Power|neutral>'");
        def.owner_overrides.emplace_back(t[0].text, t[1].text);
        break;
    }
  }
  return def;
}

MapSpec MapSpec::build(MapDefinition def) {
  MapSpec m;
  if (def.powers.empty()) throw InvariantError("map declares no powers");
  if (def.provinces.empty()) throw InvariantError("map declares no provinces");
  std::set<std::string> seen_powers;
  for (const auto& p : def.powers) {
    if (!seen_powers.insert(p).second) throw InvariantError("duplicate power '" + p + "'");
  }
  m.powers_ = std::move(def.powers);
  m.provinces_ = std::move(def.provinces);

  // Locations: provinces first, then coasts in province order.
  for (int p = 0; p < m.num_provinces(); ++p) {
    const auto& spec = m.provinces_[p];
    if (!valid_id(spec.id)) throw InvariantError("invalid province id '" + spec.id + "'");
    if (!m.by_id_.emplace(spec.id, p).second) {
      throw InvariantError("duplicate province id '" + spec.id + "'");
    }
    m.locations_.push_back({spec.id, spec.long_name, p, -1});
  }
  for (int p = 0; p < m.num_provinces(); ++p) {
    const auto& spec = m.provinces_[p];
    if (!spec.coasts.empty() && spec.terrain != Terrain::kCoast) {
      throw InvariantError("province " + spec.id + " has coasts but is not coastal");
    }
    for (int c = 0; c < static_cast<int>(spec.coasts.size()); ++c) {
      LocationInfo info{spec.id + "/" + spec.coasts[c].code,
                        spec.long_name + "'s " + spec.coasts[c].name + " Coast", p, c};
      if (!m.by_id_.emplace(info.id, m.num_locations()).second) {
        throw InvariantError("duplicate coast '" + info.id + "'");
      }
      m.locations_.push_back(std::move(info));
    }
  }
  for (Loc l = 0; l < m.num_locations(); ++l) {
    if (!m.by_name_.emplace(m.locations_[l].display, l).second) {
      throw InvariantError("duplicate display name '" + m.locations_[l].display + "'");
    }
  }

  const int n_loc = m.num_locations();
  m.army_adj_.assign(n_loc, {});
  m.fleet_adj_.assign(n_loc, {});
  auto lookup = [&](const std::string& from, const std::string& id) {
    auto it = m.by_id_.find(id);
    if (it == m.by_id_.end()) {
      throw InvariantError("edge " + from + " -> " + id + " references unknown location");
    }
    return it->second;
  };
  for (int p = 0; p < m.num_provinces(); ++p) {
    const auto& spec = m.provinces_[p];
    if (spec.terrain == Terrain::kWater && !spec.army_adjacent.empty()) {
      throw InvariantError("water province " + spec.id + " has army edges");
    }
    for (const auto& id : spec.army_adjacent) {
      Loc to = lookup(spec.id, id);
      if (to >= m.num_provinces()) {
        throw InvariantError("army edge " + spec.id + " -> " + id + " targets a coast");
      }
      if (m.provinces_[to].terrain == Terrain::kWater) {
        throw InvariantError("army edge " + spec.id + " -> " + id + " enters water");
      }
      if (to == p) throw InvariantError("self edge at " + spec.id);
      m.army_adj_[p].push_back(to);
    }
  }
  auto add_fleet_edges = [&](Loc from, const std::vector<std::string>& ids) {
    const std::string& from_id = m.locations_[from].id;
    if (!ids.empty() && !m.can_occupy(UnitKind::kFleet, from)) {
      throw InvariantError("fleet edges at " + from_id + ", which no fleet may occupy");
    }
    for (const auto& id : ids) {
      Loc to = lookup(from_id, id);
      if (!m.can_occupy(UnitKind::kFleet, to)) {
        throw InvariantError("fleet edge " + from_id + " -> " + id +
                             " targets a location no fleet may occupy");
      }
      if (m.province_of(to) == m.province_of(from)) {
        throw InvariantError("self edge at " + from_id);
      }
      m.fleet_adj_[from].push_back(to);
    }
  };
  for (int p = 0; p < m.num_provinces(); ++p) {
    const auto& spec = m.provinces_[p];
    add_fleet_edges(p, spec.fleet_adjacent);
  }
  for (Loc l = m.num_provinces(); l < n_loc; ++l) {
    const auto& info = m.locations_[l];
    add_fleet_edges(l, m.provinces_[info.province].coasts[info.coast].fleet_adjacent);
  }
  // Symmetry and duplicates.
  for (int kind = 0; kind < 2; ++kind) {
    auto& adj = kind == 0 ? m.army_adj_ : m.fleet_adj_;
    for (Loc a = 0; a < n_loc; ++a) {
      std::set<Loc> uniq(adj[a].begin(), adj[a].end());
      if (uniq.size() != adj[a].size()) {
        throw InvariantError(std::string("duplicate ") + (kind == 0 ? "army" : "fleet") +
                             " edge at " + m.locations_[a].id);
      }
      for (Loc b : adj[a]) {
        if (std::find(adj[b].begin(), adj[b].end(), a) == adj[b].end()) {
          throw InvariantError(std::string("one-directional ") +
                               (kind == 0 ? "army" : "fleet") + " adjacency " +
                               m.locations_[a].id + " -> " + m.locations_[b].id);
        }
      }
      std::sort(adj[a].begin(), adj[a].end());
    }
  }

  // Centers, homes, owners.
  m.home_power_.assign(m.num_provinces(), kNeutral);
  m.start_owner_.assign(m.num_provinces(), kNeutral);
  for (int p = 0; p < m.num_provinces(); ++p) {
    const auto& spec = m.provinces_[p];
    if (spec.is_supply_center) {
      if (spec.terrain == Terrain::kWater) {
        throw InvariantError("water province " + spec.id + " cannot be a supply center");
      }
      m.supply_centers_.push_back(p);
    }
    if (spec.home_of) {
      auto power = m.find_power(*spec.home_of);
      if (!power) {
        throw InvariantError("home power '" + *spec.home_of + "' of " + spec.id +
                             " is not declared");
      }
      if (!spec.is_supply_center) {
        throw InvariantError("home center " + spec.id + " is not a supply center");
      }
      m.home_power_[p] = *power;
      m.start_owner_[p] = *power;
    }
  }
  for (const auto& [id, owner] : def.owner_overrides) {
    auto it = m.by_id_.find(id);
    if (it == m.by_id_.end() || it->second >= m.num_provinces()) {
      throw InvariantError("owner entry for unknown province '" + id + "'");
    }
    if (!m.is_supply_center(it->second)) {
      throw InvariantError("owner entry for " + id + ", which is not a supply center");
    }
    if (owner == "neutral") {
      m.start_owner_[it->second] = kNeutral;
    } else {
      auto power = m.find_power(owner);
      if (!power) throw InvariantError("owner '" + owner + "' of " + id + " is not declared");
      m.start_owner_[it->second] = *power;
    }
  }

  std::vector<char> occupied(m.num_provinces(), 0);
  for (const auto& su : def.start_units) {
    auto power = m.find_power(su.power);
    if (!power) throw InvariantError("start unit for undeclared power '" + su.power + "'");
    auto loc = m.find_location(su.location);
    if (!loc) throw InvariantError("start unit at unknown location '" + su.location + "'");
    if (!m.can_occupy(su.kind, *loc)) {
      throw InvariantError(std::string("start ") + unit_word(su.kind) + " at " +
                           su.location + " is not legal for its kind");
    }
    int prov = m.province_of(*loc);
    if (occupied[prov]) throw InvariantError("two start units in " + m.provinces_[prov].id);
    occupied[prov] = 1;
    m.start_units_.push_back({*power, su.kind, *loc});
  }

  m.index();
  return m;
}

bool MapSpec::can_occupy(UnitKind kind, Loc loc) const {
  const LocationInfo& info = locations_[loc];
  const ProvinceSpec& spec = provinces_[info.province];
  if (kind == UnitKind::kArmy) {
    return info.coast < 0 && spec.terrain != Terrain::kWater;
  }
  if (info.coast >= 0) return true;
  if (spec.terrain == Terrain::kWater) return true;
  return spec.terrain == Terrain::kCoast && spec.coasts.empty();
}

bool MapSpec::adjacent_to(UnitKind kind, Loc from, Loc to) const {
  const auto& adj = adjacent(kind, from);
  return std::binary_search(adj.begin(), adj.end(), to);
}

void MapSpec::index() {
  const int n_prov = num_provinces();
  const int n_loc = num_locations();
  for (int kind = 0; kind < 2; ++kind) {
    const auto& adj = kind == 0 ? army_adj_ : fleet_adj_;
    reach_[kind].assign(n_loc, std::vector<char>(n_prov, 0));
    for (Loc a = 0; a < n_loc; ++a) {
      for (Loc b : adj[a]) reach_[kind][a][province_of(b)] = 1;
    }
    // Multi-source BFS from every location of each target province.
    dist_[kind].assign(static_cast<std::size_t>(n_loc) * n_prov, kUnreachable);
    for (int target = 0; target < n_prov; ++target) {
      std::vector<int> d(n_loc, kUnreachable);
      std::deque<Loc> queue;
      for (Loc l = 0; l < n_loc; ++l) {
        if (province_of(l) == target) {
          d[l] = 0;
          queue.push_back(l);
        }
      }
      while (!queue.empty()) {
        Loc l = queue.front();
        queue.pop_front();
        for (Loc nb : adj[l]) {
          if (d[nb] == kUnreachable) {
            d[nb] = d[l] + 1;
            queue.push_back(nb);
          }
        }
      }
      for (Loc l = 0; l < n_loc; ++l) dist_[kind][l * n_prov + target] = d[l];
    }
  }

  std::vector<std::vector<int>> prov_adj(n_prov);
  for (int kind = 0; kind < 2; ++kind) {
    const auto& adj = kind == 0 ? army_adj_ : fleet_adj_;
    for (Loc a = 0; a < n_loc; ++a) {
      for (Loc b : adj[a]) prov_adj[province_of(a)].push_back(province_of(b));
    }
  }
  any_dist_.assign(static_cast<std::size_t>(n_prov) * n_prov, kUnreachable);
  for (int s = 0; s < n_prov; ++s) {
    std::deque<int> queue{s};
    any_dist_[s * n_prov + s] = 0;
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      for (int q : prov_adj[p]) {
        if (any_dist_[s * n_prov + q] == kUnreachable) {
          any_dist_[s * n_prov + q] = any_dist_[s * n_prov + p] + 1;
          queue.push_back(q);
        }
      }
    }
  }

  std::vector<int> order(n_loc);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Loc a, Loc b) {
    return locations_[a].display < locations_[b].display;
  });
  name_rank_.assign(n_loc, 0);
  for (int i = 0; i < n_loc; ++i) name_rank_[order[i]] = i;

  order.resize(n_prov);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return provinces_[a].id < provinces_[b].id; });
  id_rank_.assign(n_prov, 0);
  for (int i = 0; i < n_prov; ++i) id_rank_[order[i]] = i;
}

std::optional<Loc> MapSpec::find_location(std::string_view id) const {
  auto it = by_id_.find(text::upper(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<Loc> MapSpec::find_by_name(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<PowerId> MapSpec::find_power(std::string_view name) const {
  for (PowerId p = 0; p < num_powers(); ++p) {
    if (powers_[p] == name) return p;
  }
  return std::nullopt;
}

MapSpec load_map(std::string_view text) { return MapSpec::build(parse_map_definition(text)); }

MapSpec load_map_file(const std::string& path) { return load_map(text::read_file(path)); }

}  // namespace dipeq

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

#include "dipeq/state.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "dipeq/error.hpp"
#include "text_util.hpp"

#ifndef DIPEQ_DATA_DIR
#define DIPEQ_DATA_DIR "data"
#endif

namespace dipeq {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::kSpringMove: return "spring_move";
    case Phase::kSpringRetreat: return "spring_retreat";
    case Phase::kFallMove: return "fall_move";
    case Phase::kFallRetreat: return "fall_retreat";
    case Phase::kWinterAdjust: return "winter_adjust";
  }
  return "?";
}

std::optional<Phase> phase_from_name(std::string_view name) {
  for (Phase p : {Phase::kSpringMove, Phase::kSpringRetreat, Phase::kFallMove,
                  Phase::kFallRetreat, Phase::kWinterAdjust}) {
    if (name == phase_name(p)) return p;
  }
  return std::nullopt;
}

bool is_move_phase(Phase phase) {
  return phase == Phase::kSpringMove || phase == Phase::kFallMove;
}

bool is_retreat_phase(Phase phase) {
  return phase == Phase::kSpringRetreat || phase == Phase::kFallRetreat;
}

bool operator==(const Unit& a, const Unit& b) {
  return a.owner == b.owner && a.kind == b.kind && a.loc == b.loc;
}

std::vector<int> GameState::occupancy() const {
  std::vector<int> occ(map->num_provinces(), -1);
  for (int i = 0; i < static_cast<int>(units.size()); ++i) {
    occ[map->province_of(units[i].loc)] = i;
  }
  return occ;
}

int GameState::unit_at(int province) const {
  for (int i = 0; i < static_cast<int>(units.size()); ++i) {
    if (map->province_of(units[i].loc) == province) return i;
  }
  return -1;
}

int GameState::sc_count(PowerId power) const {
  int n = 0;
  for (int p : map->supply_centers()) n += sc_owner[p] == power;
  return n;
}

std::vector<int> GameState::sc_counts() const {
  std::vector<int> counts(map->num_powers(), 0);
  for (int p : map->supply_centers()) {
    if (sc_owner[p] != kNeutral) ++counts[sc_owner[p]];
  }
  return counts;
}

int GameState::unit_count(PowerId power) const {
  int n = 0;
  for (const Unit& u : units) n += u.owner == power;
  return n;
}

void GameState::sort_units() {
  const MapSpec& m = *map;
  std::sort(units.begin(), units.end(), [&](const Unit& a, const Unit& b) {
    return m.id_rank(m.province_of(a.loc)) < m.id_rank(m.province_of(b.loc));
  });
  std::sort(dislodged.begin(), dislodged.end(),
            [&](const DislodgedUnit& a, const DislodgedUnit& b) {
              return m.id_rank(m.province_of(a.unit.loc)) <
                     m.id_rank(m.province_of(b.unit.loc));
            });
}

GameState initial_state(std::shared_ptr<const MapSpec> map) {
  GameState s;
  s.map = map;
  s.year = 1901;
  s.phase = Phase::kSpringMove;
  s.units = map->start_units();
  s.sc_owner = map->start_sc_owner();
  s.last_orders.assign(map->num_powers(), {});
  s.sort_units();
  return s;
}

void check_invariants(const GameState& s) {
  const MapSpec& m = *s.map;
  std::vector<char> seen(m.num_provinces(), 0);
  for (const Unit& u : s.units) {
    if (u.owner < 0 || u.owner >= m.num_powers()) throw InvariantError("unit without owner");
    if (u.loc < 0 || u.loc >= m.num_locations()) throw InvariantError("unit off the board");
    if (!m.can_occupy(u.kind, u.loc)) {
      throw InvariantError(std::string(unit_word(u.kind)) + " cannot stand in " +
                           m.location(u.loc).id);
    }
    int p = m.province_of(u.loc);
    if (seen[p]) throw InvariantError("two units in " + m.province(p).id);
    seen[p] = 1;
  }
  if (!s.dislodged.empty() && !is_retreat_phase(s.phase)) {
    throw InvariantError("dislodged units outside a retreat phase");
  }
  int owned = 0;
  for (int p = 0; p < m.num_provinces(); ++p) {
    if (s.sc_owner[p] == kNeutral) continue;
    if (!m.is_supply_center(p)) throw InvariantError(m.province(p).id + " is owned but no center");
    ++owned;
  }
  if (owned > m.total_supply_centers()) throw InvariantError("more owned centers than exist");
}

namespace {

void append_unit(std::string& out, const MapSpec& m, const Unit& u) {
  out += m.power_name(u.owner);
  out += ' ';
  out += unit_letter(u.kind);
  out += ' ';
  out += m.location(u.loc).id;
}

Phase parse_phase(const text::Line& line, std::size_t tok) {
  const std::string& t = line.tokens[tok].text;
  if (auto p = phase_from_name(t)) return *p;
  text::syntax_error(line, tok, "unknown phase '" + t + "'");
}

PowerId parse_power(const text::Line& line, std::size_t tok, const MapSpec& m) {
  if (tok >= line.tokens.size()) text::syntax_error(line, tok, "expected a power");
  auto p = m.find_power(line.tokens[tok].text);
  if (!p) text::syntax_error(line, tok, "unknown power '" + line.tokens[tok].text + "'");
  return *p;
}

Loc parse_loc(const text::Line& line, std::size_t tok, const MapSpec& m) {
  if (tok >= line.tokens.size()) text::syntax_error(line, tok, "expected a location");
  auto l = m.find_location(line.tokens[tok].text);
  if (!l) text::syntax_error(line, tok, "unknown location '" + line.tokens[tok].text + "'");
  return *l;
}

UnitKind parse_kind(const text::Line& line, std::size_t tok) {
  if (tok < line.tokens.size()) {
    if (line.tokens[tok].text == "A") return UnitKind::kArmy;
    if (line.tokens[tok].text == "F") return UnitKind::kFleet;
  }
  text::syntax_error(line, tok, "unit kind must be A or F");
}

Unit parse_unit(const text::Line& line, std::size_t tok, const MapSpec& m) {
  Unit u;
  u.owner = parse_power(line, tok, m);
  u.kind = parse_kind(line, tok + 1);
  u.loc = parse_loc(line, tok + 2, m);
  return u;
}

}  // namespace

std::string serialize_state(const GameState& s, bool include_last_orders) {
  const MapSpec& m = *s.map;
  std::string out;
  out += "year " + std::to_string(s.year) + "\n";
  out += std::string("phase ") + phase_name(s.phase) + "\n";
  GameState sorted = s;
  sorted.sort_units();
  for (const Unit& u : sorted.units) {
    out += "unit ";
    append_unit(out, m, u);
    out += '\n';
  }
  std::vector<int> centers = m.supply_centers();
  std::sort(centers.begin(), centers.end(),
            [&](int a, int b) { return m.id_rank(a) < m.id_rank(b); });
  for (int p : centers) {
    out += "owner " + m.province(p).id + " " +
           (s.sc_owner[p] == kNeutral ? std::string("neutral") : m.power_name(s.sc_owner[p])) +
           "\n";
  }
  for (const DislodgedUnit& d : sorted.dislodged) {
    out += "dislodged ";
    append_unit(out, m, d.unit);
    out += " from " + m.province(d.attacker_origin).id + " retreats";
    if (d.retreats.empty()) out += " -";
    for (Loc r : d.retreats) out += " " + m.location(r).id;
    out += '\n';
  }
  if (include_last_orders) {
    for (PowerId p = 0; p < static_cast<PowerId>(s.last_orders.size()); ++p) {
      for (const Order& o : s.last_orders[p]) {
        out += "last " + m.power_name(p) + " " + render_order(o, Dialect::kShort, m) + "\n";
      }
    }
  }
  return out;
}

GameState parse_state(std::string_view doc, std::shared_ptr<const MapSpec> map) {
  const MapSpec& m = *map;
  GameState s;
  s.map = map;
  s.sc_owner = m.start_sc_owner();
  s.last_orders.assign(m.num_powers(), {});
  for (const text::Line& line : text::split_lines(doc)) {
    const std::string& key = line.tokens[0].text;
    auto need = [&](std::size_t n) {
      if (line.tokens.size() < n) text::syntax_error(line, line.tokens.size(), "missing field");
    };
    if (key == "map") {
      continue;
    } else if (key == "year") {
      need(2);
      try {
        s.year = std::stoi(line.tokens[1].text);
      } catch (const std::exception&) {
        text::syntax_error(line, 1, "year must be an integer");
      }
    } else if (key == "phase") {
      need(2);
      s.phase = parse_phase(line, 1);
    } else if (key == "unit") {
      need(4);
      s.units.push_back(parse_unit(line, 1, m));
    } else if (key == "owner") {
      need(3);
      Loc l = parse_loc(line, 1, m);
      int p = m.province_of(l);
      if (!m.is_supply_center(p)) text::syntax_error(line, 1, m.province(p).id + " is not a supply center");
      s.sc_owner[p] = line.tokens[2].text == "neutral" ? kNeutral : parse_power(line, 2, m);
    } else if (key == "dislodged") {
      need(7);
      DislodgedUnit d;
      d.unit = parse_unit(line, 1, m);
      if (line.tokens[4].text != "from") text::syntax_error(line, 4, "expected 'from'");
      d.attacker_origin = m.province_of(parse_loc(line, 5, m));
      if (line.tokens[6].text != "retreats") text::syntax_error(line, 6, "expected 'retreats'");
      for (std::size_t i = 7; i < line.tokens.size(); ++i) {
        if (line.tokens[i].text == "-") continue;
        d.retreats.push_back(parse_loc(line, i, m));
      }
      std::sort(d.retreats.begin(), d.retreats.end());
      s.dislodged.push_back(std::move(d));
    } else if (key == "last") {
      need(3);
      PowerId p = parse_power(line, 1, m);
      try {
        s.last_orders[p].push_back(
            parse_order_text(text::rest_of_line(line, 2), Dialect::kShort, m));
      } catch (const OrderParseError& e) {
        text::syntax_error(line, 2, e.what());
      }
    } else {
      text::syntax_error(line, 0, "unknown key '" + key + "'");
    }
  }
  s.sort_units();
  for (auto& orders : s.last_orders) sort_canonical(orders, m);
  check_invariants(s);
  return s;
}

GameState load_state_file(const std::string& path) {
  std::string doc = text::read_file(path);
  for (const text::Line& line : text::split_lines(doc)) {
    if (line.tokens[0].text != "map") continue;
    if (line.tokens.size() != 2) text::syntax_error(line, 1, "expected 'map <name|path>'");
    std::string ref = line.tokens[1].text;
    // Relative map paths are relative to the state file.
    std::filesystem::path candidate = std::filesystem::path(path).parent_path() / ref;
    std::string map_path = std::filesystem::exists(candidate) && ref.find('/') != std::string::npos
                               ? candidate.string()
                               : resolve_map_path(ref);
    auto map = std::make_shared<const MapSpec>(load_map_file(map_path));
    return parse_state(doc, map);
  }
  throw SyntaxError("state file has no 'map' line", 1, 1);
}

std::uint64_t state_hash(const GameState& state) {
  std::string s = serialize_state(state, /*include_last_orders=*/false);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string data_dir() {
  if (const char* env = std::getenv("DIPEQ_DATA_DIR")) return env;
  return DIPEQ_DATA_DIR;
}

std::string resolve_map_path(const std::string& ref) {
  if (ref.find('/') != std::string::npos || ref.find('.') != std::string::npos) return ref;
  return data_dir() + "/maps/" + ref + ".map";
}

}  // namespace dipeq

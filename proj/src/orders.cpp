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

#include "dipeq/orders.hpp"

#include <algorithm>
#include <tuple>

#include "dipeq/error.hpp"

namespace dipeq {

namespace {

// Mirrors string order of the verbose tail: "holds" < "moves to ..." <
// "supports army ..." < "supports fleet ...", with a support-hold sorting
// before the support-moves that extend its text.
std::tuple<int, int, int, int, int> candidate_key(const Order& o, const MapSpec& m) {
  switch (o.type) {
    case OrderType::kHold: return {1, 0, 0, 0, 0};
    case OrderType::kDisband: return {0, 0, 0, 0, 0};
    case OrderType::kMove: return {2, m.name_rank(o.dest), 0, 0, 0};
    case OrderType::kRetreat: return {3, m.name_rank(o.dest), 0, 0, 0};
    case OrderType::kSupportHold:
      return {4, static_cast<int>(o.target_kind), m.name_rank(o.target), 0, 0};
    case OrderType::kSupportMove:
      return {4, static_cast<int>(o.target_kind), m.name_rank(o.target), 1, m.name_rank(o.dest)};
    case OrderType::kBuild:
      return {5, static_cast<int>(o.kind), m.name_rank(o.actor), 0, 0};
    case OrderType::kWaive: return {6, 0, 0, 0, 0};
  }
  return {7, 0, 0, 0, 0};
}

}  // namespace

bool candidate_less(const Order& a, const Order& b, const MapSpec& m) {
  return candidate_key(a, m) < candidate_key(b, m);
}

std::vector<Order> legal_unit_orders(const GameState& s, int idx) {
  const MapSpec& m = *s.map;
  const Unit& u = s.units[idx];
  const int home = m.province_of(u.loc);
  std::vector<Order> out;
  out.push_back(Order::hold(u.kind, u.loc));
  for (Loc nb : m.adjacent(u.kind, u.loc)) out.push_back(Order::move(u.kind, u.loc, nb));

  for (int j = 0; j < static_cast<int>(s.units.size()); ++j) {
    if (j == idx) continue;
    const Unit& other = s.units[j];
    const int op = m.province_of(other.loc);
    if (m.reaches(u.kind, u.loc, op)) {
      out.push_back(Order::support_hold(u.kind, u.loc, other.kind, op));
    }
  }
  // Support-moves: for every province Y the supporter can enter, every
  // other unit that can itself reach Y.
  for (int y = 0; y < m.num_provinces(); ++y) {
    if (y == home || !m.reaches(u.kind, u.loc, y)) continue;
    for (int j = 0; j < static_cast<int>(s.units.size()); ++j) {
      if (j == idx) continue;
      const Unit& other = s.units[j];
      if (m.province_of(other.loc) == y) continue;
      if (!m.reaches(other.kind, other.loc, y)) continue;
      out.push_back(Order::support_move(u.kind, u.loc, other.kind, m.province_of(other.loc), y));
    }
  }
  std::sort(out.begin(), out.end(),
            [&](const Order& a, const Order& b) { return candidate_less(a, b, m); });
  return out;
}

bool is_legal_unit_order(const GameState& s, int idx, const Order& o) {
  const MapSpec& m = *s.map;
  const Unit& u = s.units[idx];
  if (o.actor != u.loc || o.kind != u.kind) return false;
  const int home = m.province_of(u.loc);
  auto supported = [&](int* out) {
    if (o.target < 0 || o.target >= m.num_provinces()) return false;
    int j = s.unit_at(o.target);
    if (j < 0 || j == idx || s.units[j].kind != o.target_kind) return false;
    *out = j;
    return true;
  };
  int j = -1;
  switch (o.type) {
    case OrderType::kHold:
      return o.dest == kNoLoc && o.target == kNoLoc;
    case OrderType::kMove:
      return o.target == kNoLoc && o.dest >= 0 && o.dest < m.num_locations() &&
             m.adjacent_to(u.kind, u.loc, o.dest);
    case OrderType::kSupportHold:
      return o.dest == kNoLoc && supported(&j) && m.reaches(u.kind, u.loc, o.target);
    case OrderType::kSupportMove:
      if (!supported(&j)) return false;
      if (o.dest < 0 || o.dest >= m.num_provinces() || o.dest == home || o.dest == o.target) {
        return false;
      }
      return m.reaches(u.kind, u.loc, o.dest) &&
             m.reaches(s.units[j].kind, s.units[j].loc, o.dest);
    default:
      return false;
  }
}

std::vector<UnitOrders> legal_orders(const GameState& s, PowerId power) {
  if (!is_move_phase(s.phase)) {
    throw PhaseError(std::string("legal_orders needs a move phase, not ") + phase_name(s.phase));
  }
  std::vector<UnitOrders> out;
  for (int i = 0; i < static_cast<int>(s.units.size()); ++i) {
    if (s.units[i].owner != power) continue;
    out.push_back({s.units[i], legal_unit_orders(s, i)});
  }
  const MapSpec& m = *s.map;
  std::sort(out.begin(), out.end(), [&](const UnitOrders& a, const UnitOrders& b) {
    return m.id_rank(m.province_of(a.unit.loc)) < m.id_rank(m.province_of(b.unit.loc));
  });
  return out;
}

std::vector<Order> legal_retreats(const GameState& s, int di) {
  const DislodgedUnit& d = s.dislodged[di];
  std::vector<Order> out;
  for (Loc r : d.retreats) out.push_back(Order::retreat(d.unit.kind, d.unit.loc, r));
  std::sort(out.begin(), out.end(),
            [&](const Order& a, const Order& b) { return candidate_less(a, b, *s.map); });
  out.push_back(Order::disband(d.unit.kind, d.unit.loc));
  return out;
}

int adjustment_delta(const GameState& s, PowerId power) {
  return s.sc_count(power) - s.unit_count(power);
}

std::vector<Order> legal_adjustments(const GameState& s, PowerId power) {
  const MapSpec& m = *s.map;
  const int delta = adjustment_delta(s, power);
  std::vector<Order> out;
  if (delta > 0) {
    std::vector<int> occ = s.occupancy();
    for (Loc l = 0; l < m.num_locations(); ++l) {
      int p = m.province_of(l);
      if (m.home_power(p) != power || s.sc_owner[p] != power || occ[p] >= 0) continue;
      for (UnitKind k : {UnitKind::kArmy, UnitKind::kFleet}) {
        if (m.can_occupy(k, l)) out.push_back(Order::build(k, l));
      }
    }
    std::sort(out.begin(), out.end(),
              [&](const Order& a, const Order& b) { return candidate_less(a, b, m); });
    out.push_back(Order::waive());
  } else if (delta < 0) {
    for (const Unit& u : s.units) {
      if (u.owner == power) out.push_back(Order::disband(u.kind, u.loc));
    }
  }
  return out;
}

PowerId order_owner(const Order& o, const GameState& s) {
  if (o.actor == kNoLoc) return kNeutral;
  const MapSpec& m = *s.map;
  const int prov = m.province_of(o.actor);
  if (is_retreat_phase(s.phase)) {
    for (const auto& d : s.dislodged) {
      if (m.province_of(d.unit.loc) == prov) return d.unit.owner;
    }
    return kNeutral;
  }
  if (o.type == OrderType::kBuild) return m.home_power(prov);
  int idx = s.unit_at(prov);
  return idx < 0 ? kNeutral : s.units[idx].owner;
}

Verdict validate_order(const Order& o, const GameState& s) {
  const MapSpec& m = *s.map;
  auto contains = [&](const std::vector<Order>& v) {
    return std::find(v.begin(), v.end(), o) != v.end();
  };
  if (o.type != OrderType::kWaive &&
      (o.actor < 0 || o.actor >= m.num_locations())) {
    return {false, "actor off the board"};
  }
  if (is_move_phase(s.phase)) {
    int idx = s.unit_at(m.province_of(o.actor));
    if (idx < 0) return {false, "no unit at " + m.location(o.actor).id};
    if (!is_legal_unit_order(s, idx, o)) {
      return {false, "not among the unit's legal orders"};
    }
    return {true, ""};
  }
  if (is_retreat_phase(s.phase)) {
    for (int i = 0; i < static_cast<int>(s.dislodged.size()); ++i) {
      if (s.dislodged[i].unit.loc != o.actor) continue;
      if (contains(legal_retreats(s, i))) return {true, ""};
      return {false, "not a legal retreat"};
    }
    return {false, "no dislodged unit at " + m.location(o.actor).id};
  }
  // Winter.
  if (o.type == OrderType::kWaive) return {true, ""};
  PowerId owner = order_owner(o, s);
  if (owner == kNeutral) return {false, "no owner for the order"};
  if (contains(legal_adjustments(s, owner))) return {true, ""};
  return {false, "not a legal adjustment"};
}

}  // namespace dipeq

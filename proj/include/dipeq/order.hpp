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

#ifndef DIPEQ_ORDER_HPP
#define DIPEQ_ORDER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "dipeq/map.hpp"

namespace dipeq {

struct GameState;

enum class OrderType : std::uint8_t {
  kHold,
  kMove,
  kSupportHold,
  kSupportMove,
  kRetreat,
  kDisband,
  kBuild,
  kWaive,
};

// One unit's command. Field use by type:
//   Move, Retreat:  dest is a location (may be a coast).
//   SupportHold:    target_kind/target name the supported unit; target is
//                   the province location (coast stripped).
//   SupportMove:    as SupportHold, plus dest = destination province.
//   Build:          actor is the build location, kind the new unit.
//   Waive:          no actor.
struct Order {
  OrderType type = OrderType::kHold;
  UnitKind kind = UnitKind::kArmy;
  Loc actor = kNoLoc;
  Loc dest = kNoLoc;
  UnitKind target_kind = UnitKind::kArmy;
  Loc target = kNoLoc;

  friend bool operator==(const Order&, const Order&) = default;

  static Order hold(UnitKind k, Loc at) { return {OrderType::kHold, k, at}; }
  static Order move(UnitKind k, Loc at, Loc to) {
    return {OrderType::kMove, k, at, to};
  }
  static Order support_hold(UnitKind k, Loc at, UnitKind tk, Loc t) {
    return {OrderType::kSupportHold, k, at, kNoLoc, tk, t};
  }
  static Order support_move(UnitKind k, Loc at, UnitKind tk, Loc t, Loc to) {
    return {OrderType::kSupportMove, k, at, to, tk, t};
  }
  static Order retreat(UnitKind k, Loc at, Loc to) {
    return {OrderType::kRetreat, k, at, to};
  }
  static Order disband(UnitKind k, Loc at) {
    return {OrderType::kDisband, k, at};
  }
  static Order build(UnitKind k, Loc at) { return {OrderType::kBuild, k, at}; }
  static Order waive() { return {OrderType::kWaive}; }
};

// All orders of one power, one per unit, in canonical unit order.
struct JointAction {
  PowerId power = kNeutral;
  std::vector<Order> orders;

  friend bool operator==(const JointAction&, const JointAction&) = default;
};

enum class Dialect { kShort, kVerbose };

// Canonical unit order: actor province id, lexicographic. Waives last.
void sort_canonical(std::vector<Order>& orders, const MapSpec& map);
bool canonical_less(const Order& a, const Order& b, const MapSpec& map);

// Parses either dialect (grammar in docs/orders.md). Resolves names against
// the state's map and checks that the actor exists in the state: a unit
// for move orders, a dislodged unit for retreats and disbands in retreat
// phases. Throws OrderParseError.
Order parse_order(std::string_view text, Dialect dialect, const GameState& state);

// Syntax and name resolution only; no check against a state. Actor
// locations keep the coast written in the text.
Order parse_order_text(std::string_view text, Dialect dialect, const MapSpec& map);

std::string render_order(const Order& order, Dialect dialect, const MapSpec& map);

// Verbose text after the "<kind> in <location> " prefix, e.g.
// "moves to Greece". The form used as the candidate list and the
// assistant completion in prompts.
std::string render_order_tail(const Order& order, const MapSpec& map);

// "fleet in Ionian Sea"
std::string render_unit(UnitKind kind, Loc loc, const MapSpec& map);

std::string render_joint(const JointAction& joint, Dialect dialect,
                         const MapSpec& map);

}  // namespace dipeq

#endif  // DIPEQ_ORDER_HPP

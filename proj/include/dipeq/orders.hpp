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

// Static order legality per phase.

#ifndef DIPEQ_ORDERS_HPP
#define DIPEQ_ORDERS_HPP

#include <string>
#include <vector>

#include "dipeq/order.hpp"
#include "dipeq/state.hpp"

namespace dipeq {

struct UnitOrders {
  Unit unit;
  std::vector<Order> orders;
};

// Move-phase candidates of one unit: Hold, every Move, every SupportHold of
// an occupied province the unit could enter, every SupportMove into a
// province the unit could enter. Sorted in the alphabetical order of the
// verbose rendering.
std::vector<Order> legal_unit_orders(const GameState& state, int unit_index);

// Membership test equivalent to searching legal_unit_orders, without
// building the list.
bool is_legal_unit_order(const GameState& state, int unit_index, const Order& order);

// Per owned unit, in canonical unit order. Throws PhaseError outside move
// phases.
std::vector<UnitOrders> legal_orders(const GameState& state, PowerId power);

// Retreat moves followed by Disband for one dislodged unit.
std::vector<Order> legal_retreats(const GameState& state, int dislodged_index);

// Centers minus units: positive means builds are owed.
int adjustment_delta(const GameState& state, PowerId power);

// Winter options. With builds owed: Build per legal (location, kind) plus
// Waive. With disbands owed: Disband per unit. Otherwise empty.
std::vector<Order> legal_adjustments(const GameState& state, PowerId power);

struct Verdict {
  bool legal = false;
  std::string reason;
};

// Static legality for the actor's owner in the state's phase.
Verdict validate_order(const Order& order, const GameState& state);

// Owner of the order's actor in the state, or kNeutral.
PowerId order_owner(const Order& order, const GameState& state);

// Ordering used for candidate lists (see legal_unit_orders).
bool candidate_less(const Order& a, const Order& b, const MapSpec& map);

}  // namespace dipeq

#endif  // DIPEQ_ORDERS_HPP

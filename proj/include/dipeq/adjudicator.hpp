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

// Simultaneous resolution of movement, retreat and adjustment phases.
// Convoys are not supported.

#ifndef DIPEQ_ADJUDICATOR_HPP
#define DIPEQ_ADJUDICATOR_HPP

#include <string>
#include <vector>

#include "dipeq/order.hpp"
#include "dipeq/state.hpp"

namespace dipeq {

struct Coercion {
  PowerId power = kNeutral;
  Order submitted;
  std::string reason;
};

struct Dislodgement {
  Unit unit;
  int attacker_origin = -1;  // province
};

struct Resolution {
  // Aligned with the input state's units.
  std::vector<Order> orders;     // effective orders after coercion
  std::vector<char> succeeded;   // move went through / support not cut /
                                 // holding unit not dislodged
  std::vector<Dislodgement> dislodgements;
  GameState new_state;           // the following retreat phase
  std::vector<Coercion> coercions;
};

// Orders for units a power does not own, duplicates, and statically
// illegal orders become Hold and are logged. Powers may be supplied in any
// order; units without an order hold.
Resolution adjudicate_moves(const GameState& state, const std::vector<JointAction>& orders);

// Resolves a retreat phase and advances to fall_move or winter_adjust.
// Leaving fall updates center ownership.
GameState adjudicate_retreats(const GameState& state, const std::vector<JointAction>& orders,
                              std::vector<Coercion>* log = nullptr);

// Resolves winter adjustments and advances to spring of the next year.
GameState adjudicate_builds(const GameState& state, const std::vector<JointAction>& orders,
                            std::vector<Coercion>* log = nullptr);

// Phase dispatcher. A movement phase without dislodgements skips its
// retreat phase.
GameState step(const GameState& state, const std::vector<JointAction>& orders,
               std::vector<Coercion>* log = nullptr);

// The unit a power loses first when it must disband without orders:
// farthest from an owned home center, ties to the canonical first.
int auto_disband_choice(const GameState& state, PowerId power);

// Powers at or above the map's win threshold, if any.
PowerId solo_winner(const GameState& state);

}  // namespace dipeq

#endif  // DIPEQ_ADJUDICATOR_HPP

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

// Text encoding of states and tasks, and Q-weighted per-unit training
// records.

#ifndef DIPEQ_DATASET_HPP
#define DIPEQ_DATASET_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "dipeq/anchor.hpp"
#include "dipeq/search.hpp"
#include "dipeq/state.hpp"

namespace dipeq {

extern const char kSystemPrompt[];

// Board description for `power`. Move phases only; throws PhaseError.
std::string encode_state_text(const GameState& state, PowerId power);

// Ends with the unit's verbose name so a completion such as
// "moves to Greece" finishes the order.
std::string build_task_prompt(const std::vector<std::string>& previous_orders,
                              const Unit& unit, const std::vector<Order>& candidates,
                              const MapSpec& map);

// Factorization order used for records: armies before fleets, then by
// location display name.
std::vector<int> prompt_unit_order(const std::vector<Unit>& units, const MapSpec& map);

struct UnitTransition {
  std::string system;
  std::string user;       // state text, blank line, task text
  std::string assistant;  // order tail
  double q_value = 0.0;
  double weight = 0.0;    // exp(q_value)
  // meta
  std::uint64_t game = 0;
  int year = 0;
  Phase phase = Phase::kSpringMove;
  std::string power;
  int unit_index = 0;     // 1-based d
  int units = 0;          // D
  std::string unit;       // verbose unit name
  std::uint64_t seed = 0;
};

struct EmitOptions {
  // Character budget for system + user + assistant; about four
  // characters per token for a 2048-token window.
  std::size_t max_chars = 8192;
};

// One JSON object per line, keys in fixed order, reals with 17
// significant digits.
std::string transition_to_json(const UnitTransition& t);

// Per-unit records of `selected` (an index into ps.candidates.joints)
// with the lower-bound Q. Throws Error if a record exceeds the budget.
std::vector<UnitTransition> make_transitions(const GameState& state, const PowerSearch& ps,
                                             int selected, double beta,
                                             const EmitOptions& options = {});

struct GenConfig {
  SearchConfig search;
  int max_year = 0;  // 0: start year + 2
  EmitOptions emit;
};

struct DatasetSummary {
  int games = 0;
  int phases = 0;        // move phases played
  std::size_t transitions = 0;
  double mean_abs_q = 0.0;
};

using TransitionObserver = std::function<void(const GameState&, const UnitTransition&)>;

// Self-play where every power samples its joint action from its final
// search policy. Each record is written to `out` as a JSON line.
DatasetSummary selfplay_generate(std::shared_ptr<const MapSpec> map, int n_games,
                                 const GenConfig& config, const AnchorPolicy& anchor,
                                 std::ostream& out, const TransitionObserver& observer = {});

}  // namespace dipeq

#endif  // DIPEQ_DATASET_HPP

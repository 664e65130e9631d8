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

// Game loop, outcome classification and 1-vs-rest tournaments.

#ifndef DIPEQ_EVAL_HPP
#define DIPEQ_EVAL_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "dipeq/anchor.hpp"
#include "dipeq/search.hpp"
#include "dipeq/state.hpp"

namespace dipeq {

enum class Classification { kWin, kMostSc, kSurvived, kDefeated };
enum class Termination { kSoloWin, kMaxYearDraw };

const char* classification_name(Classification c);
const char* termination_name(Termination t);

struct GameOutcome {
  std::vector<int> sc_counts;
  std::vector<Classification> classes;
  std::vector<double> sos;
  Termination termination = Termination::kMaxYearDraw;
  PowerId winner = kNeutral;
  int final_year = 0;
  int move_phases = 0;
};

// Total function of the final counts and how the game ended. In a draw
// every non-winner holding the maximum count is most_sc.
GameOutcome classify_outcome(const GameState& final_state, Termination termination);

// Per (year, phase, power) orders in the short dialect. Unlisted move
// phases hold; retreats and adjustments fall back to the rollout rules.
class Script {
 public:
  static Script parse(std::string_view text, const MapSpec& map);
  static Script load(const std::string& path, const MapSpec& map);
  // Null when nothing is scripted for this phase and power.
  const std::vector<std::string>* find(int year, Phase phase, PowerId power) const;

 private:
  std::map<std::tuple<int, int, PowerId>, std::vector<std::string>> orders_;
};

enum class AgentKind { kAnchorOnly, kPikl, kScripted };
enum class ActMode { kSample, kArgmax };

struct AgentSpec {
  AgentKind kind = AgentKind::kAnchorOnly;
  SearchConfig search;                   // pikl only
  ActMode act = ActMode::kSample;        // pikl only
  bool search_all_powers = false;        // pikl only; else others follow the anchor
  std::shared_ptr<const Script> script;  // scripted only

  // "anchor_only", "pikl", or "scripted:<path>".
  static AgentSpec from_name(const std::string& name, const MapSpec& map);
  std::string name() const;
};

// The move-phase orders of `power`.
JointAction agent_act(const AgentSpec& agent, const GameState& state, PowerId power,
                      const AnchorPolicy& anchor, std::uint64_t seed);

struct PlayConfig {
  int max_year = 0;  // 0: start year + 20
};

// Plays from the map's opening until a solo or the end of max_year.
GameOutcome play_game(std::shared_ptr<const MapSpec> map, const std::vector<AgentSpec>& agents,
                      const AnchorPolicy& anchor, const PlayConfig& play, std::uint64_t seed);

struct Metric {
  double mean = 0.0;
  double se = 0.0;  // sample stdev / sqrt(n)
};

Metric mean_and_se(const std::vector<double>& xs);

struct TournamentResult {
  int games = 0;
  std::vector<PowerId> seats;         // agent_a's power per game
  std::vector<GameOutcome> outcomes;
  Metric sos, win, most_sc, survived, defeated;  // agent_a's seat
  std::vector<Metric> sos_by_power;   // every power across all games
};

// Game g seats agent_a on power g mod P and agent_b everywhere else.
TournamentResult tournament(std::shared_ptr<const MapSpec> map, const AgentSpec& agent_a,
                            const AgentSpec& agent_b, int n_games, const AnchorPolicy& anchor,
                            const PlayConfig& play, std::uint64_t seed);

// Table for humans, or "key value" lines with `lines` set.
void write_tournament(std::ostream& out, const TournamentResult& result, const MapSpec& map,
                      bool lines);

}  // namespace dipeq

#endif  // DIPEQ_EVAL_HPP

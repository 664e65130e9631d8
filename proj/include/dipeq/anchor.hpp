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

// Anchor policies and the rollout utility estimator.

#ifndef DIPEQ_ANCHOR_HPP
#define DIPEQ_ANCHOR_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "dipeq/order.hpp"
#include "dipeq/rng.hpp"
#include "dipeq/state.hpp"

namespace dipeq {

// C_i^2 / sum_j C_j^2. Throws Error when every count is zero.
std::vector<double> sos_score(const std::vector<int>& counts);

// Center counts if every occupied center went to its occupier now.
std::vector<int> provisional_counts(const GameState& state);

enum class AnchorKind { kUniform, kHeuristic, kTable };

struct HeuristicWeights {
  double onto_center = 2.0;     // move onto a center the power does not own
  double toward_center = 1.0;   // move that shortens the way to one
  double support_own = 0.5;     // support of the power's own move
  double temperature = 1.0;
};

// (state hash, power, unit) -> order text -> probability. The file format
// is documented in docs/formats.md.
class AnchorTable {
 public:
  static AnchorTable parse(std::string_view text);
  static AnchorTable load(const std::string& path);

  void add(std::uint64_t state_hash, const std::string& power, const std::string& unit,
           const std::string& order, double prob);
  // Null when the table has nothing for this unit.
  const std::unordered_map<std::string, double>* find(std::uint64_t state_hash,
                                                       const std::string& power,
                                                       const std::string& unit) const;
  std::size_t size() const { return entries_.size(); }

 private:
  static std::string key(std::uint64_t h, const std::string& power, const std::string& unit);
  std::unordered_map<std::string, std::unordered_map<std::string, double>> entries_;
};

class AnchorPolicy {
 public:
  static constexpr double kDefaultFloor = 1e-3;

  static AnchorPolicy uniform(double floor = kDefaultFloor);
  static AnchorPolicy heuristic(HeuristicWeights weights = {}, double floor = kDefaultFloor);
  // Units missing from the table fall back to uniform.
  static AnchorPolicy table(std::shared_ptr<const AnchorTable> table,
                            double floor = kDefaultFloor);

  AnchorKind kind() const { return kind_; }
  double floor() const { return floor_; }
  const HeuristicWeights& weights() const { return weights_; }

  // Distribution over `candidates` (the unit's legal orders). Every entry
  // is at least min(floor, 1/n): the smallest uniform mixture that lifts
  // the minimum to the floor is applied, and none when it already holds.
  std::vector<double> unit_distribution(const GameState& state, PowerId power,
                                        const Unit& unit,
                                        const std::vector<Order>& candidates) const;

  // Raw scores before the softmax (heuristic kind only; zeros otherwise).
  std::vector<double> heuristic_scores(const GameState& state, PowerId power, const Unit& unit,
                                       const std::vector<Order>& candidates) const;

 private:
  AnchorKind kind_ = AnchorKind::kUniform;
  double floor_ = kDefaultFloor;
  HeuristicWeights weights_;
  std::shared_ptr<const AnchorTable> table_;
};

// Lifts every probability to at least min(floor, 1/n) by mixing in the
// least uniform mass that achieves it.
void apply_floor(std::vector<double>& probs, double floor);

// sum_d log tau(a^d | s) over the units' full legal lists. Throws
// IllegalActionError if an order is not legal for its unit or a unit is
// missing.
double anchor_joint_logprob(const AnchorPolicy& anchor, const GameState& state, PowerId power,
                            const JointAction& joint);

// One independent draw per unit from the anchor.
JointAction sample_anchor_joint(const AnchorPolicy& anchor, const GameState& state,
                                PowerId power, Rng& rng);

// The per-unit argmax (first on ties).
JointAction anchor_argmax_joint(const AnchorPolicy& anchor, const GameState& state,
                                PowerId power);

struct UtilityEstimate {
  std::vector<double> values;  // per power, sums to 1
  int rollouts_used = 0;
  bool horizon_reached = true;
};

// Applies `joints` (powers without a joint hold), then plays `horizon`
// further movement phases with every power sampling from the anchor.
// Retreats are random, adjustments greedy. Returns the mean SoS of the
// provisional center counts over `rollouts` runs. A solo win ends a
// rollout early with the winner scoring 1 and clears horizon_reached.
UtilityEstimate estimate_utility(const GameState& state, const std::vector<JointAction>& joints,
                                 const AnchorPolicy& anchor, int rollouts, int horizon,
                                 std::uint64_t seed);

// Rollout policies, shared with the game loop.
JointAction random_retreats(const GameState& state, PowerId power, Rng& rng);
JointAction greedy_adjustments(const GameState& state, PowerId power);

}  // namespace dipeq

#endif  // DIPEQ_ANCHOR_HPP

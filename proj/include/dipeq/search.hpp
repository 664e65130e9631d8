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

// KL-anchored Hedge over candidate joint actions.

#ifndef DIPEQ_SEARCH_HPP
#define DIPEQ_SEARCH_HPP

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "dipeq/anchor.hpp"
#include "dipeq/order.hpp"
#include "dipeq/state.hpp"

namespace dipeq {

struct SearchConfig {
  int iterations = 256;
  int n_candidates = 50;
  int max_per_unit = 6;
  double beta = 0.1;
  double nash_explore = 0.1;  // epsilon
  int rollouts = 16;
  int horizon = 4;
  std::uint64_t seed = 0;
  bool record_trace = false;

  // Throws Error naming the first violated bound.
  void validate() const;
};

// pi proportional to exp(beta * log tau + q), max-subtracted.
std::vector<double> policy_from_q(std::span<const double> q, std::span<const double> anchor_logprobs,
                                  double beta);

struct Candidates {
  std::vector<Unit> units;                       // canonical order
  std::vector<std::vector<Order>> top_orders;    // per unit, legal-list order
  std::vector<JointAction> joints;
};

// Per unit the max_per_unit most probable anchor orders (ties to the
// earlier candidate). Enumerates the product of those lists when it has at
// most n_candidates entries; otherwise starts from the anchor argmax and
// adds distinct draws where each unit samples the anchor restricted to its
// top list, or with probability epsilon a uniform order from it.
Candidates generate_candidates(const GameState& state, PowerId power, const AnchorPolicy& anchor,
                               const SearchConfig& config, Rng& rng);

struct TraceRecord {
  int iteration = 0;
  PowerId power = kNeutral;
  int candidate = 0;
  double mean_q = 0.0;
  double prob = 0.0;
};

struct PowerSearch {
  PowerId power = kNeutral;
  Candidates candidates;
  std::vector<double> policy;          // pi^T
  std::vector<double> average_policy;  // mean of pi^1..pi^T
  std::vector<double> mean_q;          // running mean of sampled utilities
  std::vector<double> anchor_logprob;  // log tau of each candidate joint
  std::vector<double> joint_q_with_anchor;  // mean_q + beta * log tau
};

struct SearchResult {
  std::vector<PowerSearch> powers;  // one per searched power, id order
  int iterations = 0;
  std::size_t utility_evaluations = 0;
  std::vector<TraceRecord> trace;

  const PowerSearch* find(PowerId power) const;
};

// Simultaneous piKL-Hedge for `powers` (all powers when empty). Powers not
// searched are modelled by anchor draws. Deterministic given config.seed.
SearchResult run_pikl(const GameState& state, const SearchConfig& config,
                      const AnchorPolicy& anchor, std::vector<PowerId> powers = {});

// Line-delimited trace: "iteration power candidate mean_q prob".
void write_trace(std::ostream& out, const SearchResult& result, const MapSpec& map);

}  // namespace dipeq

#endif  // DIPEQ_SEARCH_HPP

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

// Randomized sweeps behind `dipeq verify`.

#ifndef DIPEQ_VERIFY_HPP
#define DIPEQ_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dipeq/factorizer.hpp"
#include "dipeq/rng.hpp"

namespace dipeq {

// D in {1,2,3}, alphabets in {2,3,4}, q ~ U[-2,2], random normalized
// anchor, beta drawn from {0, 0.1, 1}.
JointQTable random_joint_table(Rng& rng);

struct Theorem1Report {
  int cases = 0;
  double max_discrepancy = 0.0;
};
Theorem1Report sweep_theorem1(int cases, std::uint64_t seed);

struct LowerBoundReport {
  int cases = 0;
  std::size_t comparisons = 0;
  int violations = 0;            // LB above exact beyond 1e-12
  int saturation_cases = 0;
  double max_saturation_gap = 0.0;
};
// Half random tables, half with one completion ahead by >= 20 and beta 0.
LowerBoundReport sweep_lower_bound(int cases, std::uint64_t seed);

struct Theorem2Row {
  std::string game;
  double beta = 0.0;
  bool skewed = false;
  double expl1 = 0.0, expl2 = 0.0;
  double bound1 = 0.0, bound2 = 0.0;
  double reg_rise = 0.0;  // worst moving-average rise of the regularized gap
  double raw_rise = 0.0;  // same for plain exploitability, informational
  double factorization_error = 0.0;
  bool bound_ok = false;
  bool monotone_ok = false;
};
// RPS and `random_games` random factored games, both anchor kinds, beta in
// {0.05, 0.1}, exact expectation, `iterations` steps each.
std::vector<Theorem2Row> sweep_theorem2(int random_games, int iterations, std::uint64_t seed);

}  // namespace dipeq

#endif  // DIPEQ_VERIFY_HPP

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

#include "dipeq/verify.hpp"

#include <algorithm>
#include <cmath>

#include "dipeq/equilibria.hpp"

namespace dipeq {

namespace {

void fill_random(JointQTable& t, Rng& rng) {
  std::vector<double> w(t.size());
  double total = 0.0;
  for (double& x : w) {
    x = 0.05 + rng.uniform();
    total += x;
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    t.set(t.action_at(i), 4.0 * rng.uniform() - 2.0, std::log(w[i] / total));
  }
}

std::vector<int> random_alphabets(Rng& rng) {
  std::vector<int> a(1 + rng.below(3));
  for (int& x : a) x = 2 + static_cast<int>(rng.below(3));
  return a;
}

}  // namespace

JointQTable random_joint_table(Rng& rng) {
  static const double kBetas[] = {0.0, 0.1, 1.0};
  JointQTable t(random_alphabets(rng), kBetas[rng.below(3)]);
  fill_random(t, rng);
  return t;
}

Theorem1Report sweep_theorem1(int cases, std::uint64_t seed) {
  Rng rng(mix_seed(seed, {0x7431ULL}));
  Theorem1Report r;
  for (int i = 0; i < cases; ++i) {
    JointQTable t = random_joint_table(rng);
    r.max_discrepancy = std::max(r.max_discrepancy, verify_theorem1(t));
    ++r.cases;
  }
  return r;
}

LowerBoundReport sweep_lower_bound(int cases, std::uint64_t seed) {
  Rng rng(mix_seed(seed, {0x6c62ULL}));
  LowerBoundReport r;
  for (int i = 0; i < cases; ++i) {
    const bool saturate = i % 2 == 1;
    JointQTable t = saturate ? JointQTable(random_alphabets(rng), 0.0) : random_joint_table(rng);
    fill_random(t, rng);
    std::size_t best = rng.below(t.size());
    if (saturate) {
      // Lift one joint action 20 above the log-sum-exp of all the others,
      // which also puts it 20 above each of them.
      std::vector<double> rest;
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (k != best) rest.push_back(t.q(t.action_at(k)));
      }
      auto a = t.action_at(best);
      t.set(a, log_sum_exp(rest) + 20.0 + rng.uniform(), t.anchor_logprob(a));
      ++r.saturation_cases;
    }
    const auto action = t.action_at(best);
    const auto lb = lb_unit_q(t, action);
    for (int d = 1; d <= t.num_units(); ++d) {
      UnitQ u = exact_unit_q(t, d, std::span<const int>(action.data(), d - 1));
      const double exact = u.values[action[d - 1]];
      ++r.comparisons;
      if (lb[d - 1] > exact + 1e-12) ++r.violations;
      if (saturate) r.max_saturation_gap = std::max(r.max_saturation_gap, exact - lb[d - 1]);
    }
    ++r.cases;
  }
  return r;
}

std::vector<Theorem2Row> sweep_theorem2(int random_games, int iterations, std::uint64_t seed) {
  Rng rng(mix_seed(seed, {0x7432ULL}));
  struct Named {
    std::string name;
    MatrixGame game;
    bool skewed;
  };
  std::vector<Named> games;
  games.push_back({"rps", MatrixGame::rock_paper_scissors(), false});
  for (int g = 0; g < random_games; ++g) {
    for (bool skewed : {false, true}) {
      games.push_back({"random" + std::to_string(g), MatrixGame::random_factored(rng, skewed), skewed});
    }
  }
  std::vector<Theorem2Row> rows;
  const std::size_t burn = static_cast<std::size_t>(iterations) / 10;
  for (const Named& ng : games) {
    for (double beta : {0.05, 0.1}) {
      LabConfig cfg;
      cfg.beta1 = cfg.beta2 = beta;
      cfg.iterations = iterations;
      cfg.seed = seed;
      LabResult res = run_factored_pikl(ng.game, cfg);
      Theorem2Row row;
      row.game = ng.name;
      row.beta = beta;
      row.skewed = ng.skewed;
      row.expl1 = res.trace.back().expl1;
      row.expl2 = res.trace.back().expl2;
      row.bound1 = beta * delta_bound(ng.game.tau1);
      row.bound2 = beta * delta_bound(ng.game.tau2);
      row.factorization_error = res.max_factorization_error;
      row.bound_ok = row.expl1 <= row.bound1 + 0.01 && row.expl2 <= row.bound2 + 0.01;
      // The gating trend is the regularized duality gap (both players
      // summed); plain exploitability rises are kept for reporting.
      std::vector<double> gap, e1, e2;
      for (const auto& p : res.trace) {
        gap.push_back(p.reg1 + p.reg2);
        e1.push_back(p.expl1);
        e2.push_back(p.expl2);
      }
      double c = 0, d = 0;
      row.monotone_ok = moving_average_non_increasing(gap, burn, 100, 1e-12, &row.reg_rise);
      moving_average_non_increasing(e1, burn, 100, 1e-12, &c);
      moving_average_non_increasing(e2, burn, 100, 1e-12, &d);
      row.raw_rise = std::max(c, d);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace dipeq

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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// fails. Every tolerance and time limit lives in this file. Pass criterion
// numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dipeq/anchor.hpp"
#include "dipeq/case_file.hpp"
#include "dipeq/config.hpp"
#include "dipeq/dataset.hpp"
#include "dipeq/equilibria.hpp"
#include "dipeq/eval.hpp"
#include "dipeq/factorizer.hpp"
#include "dipeq/rng.hpp"
#include "dipeq/search.hpp"
#include "support/brute_force.hpp"
#include "support/ionian.hpp"
#include "support/records.hpp"
#include "support/test_util.hpp"

namespace dipeq {
namespace {

// Pinned tolerances and budgets.
constexpr double kTheorem1Tol = 1e-9;
constexpr double kTheorem1Seconds = 10;
constexpr int kTheorem1Tables = 200;
constexpr int kLowerBoundTables = 10000;
constexpr double kLowerBoundSlack = 1e-12;
constexpr double kSaturationMargin = 20.0;
constexpr double kSaturationTol = 1e-8;
constexpr double kLowerBoundSeconds = 30;
constexpr int kTheorem2RandomGames = 20;
constexpr int kTheorem2Iterations = 10000;
constexpr double kTheorem2Slack = 0.01;
constexpr std::size_t kTheorem2Window = 100;
constexpr double kTheorem2TrendSlack = 1e-12;
constexpr double kTheorem2Seconds = 300;
constexpr double kAlgebraTol = 1e-12;
constexpr int kAlgebraCases = 10000;
constexpr int kOracleProfiles = 12000;
constexpr double kOracleSeconds = 120;
constexpr double kSosTol = 1e-12;
constexpr int kSymmetricGames = 200;
constexpr double kSymmetricSe = 3.0;
constexpr double kSymmetricSeconds = 300;
constexpr int kSearchGames = 200;
constexpr double kSearchSe = 2.0;
constexpr double kSearchSeconds = 900;
constexpr double kWeightRelTol = 1e-12;
constexpr std::uint64_t kSeed = 2026;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

// ---------------------------------------------------------------------------
// Independent numerics: plain loops, no shared helpers with the library.

double naive_lse(const std::vector<double>& xs) {
  double hi = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

std::vector<double> naive_softmax(const std::vector<double>& z) {
  double hi = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += p[i] = std::exp(z[i] - hi);
  for (double& x : p) x /= s;
  return p;
}

struct Table {
  std::vector<int> alphabets;
  double beta = 0.0;
  std::vector<std::vector<int>> actions;
  std::vector<double> q, logtau;
  double value(std::size_t i) const { return q[i] + beta * logtau[i]; }
};

Table random_table(Rng& rng) {
  Table t;
  const int D = 1 + static_cast<int>(rng.below(3));
  for (int d = 0; d < D; ++d) t.alphabets.push_back(2 + static_cast<int>(rng.below(3)));
  const double betas[] = {0.0, 0.1, 1.0};
  t.beta = betas[rng.below(3)];
  std::vector<int> a(D, 0);
  while (true) {
    t.actions.push_back(a);
    int d = D - 1;
    while (d >= 0 && ++a[d] == t.alphabets[d]) a[d--] = 0;
    if (d < 0) break;
  }
  std::vector<double> w(t.actions.size());
  double total = 0.0;
  for (double& x : w) total += x = 0.05 + rng.uniform();
  for (std::size_t i = 0; i < w.size(); ++i) {
    t.q.push_back(4.0 * rng.uniform() - 2.0);
    t.logtau.push_back(std::log(w[i] / total));
  }
  return t;
}

JointQTable to_library(const Table& t) {
  JointQTable j(t.alphabets, t.beta);
  for (std::size_t i = 0; i < t.actions.size(); ++i) j.set(t.actions[i], t.q[i], t.logtau[i]);
  return j;
}

// Exact conditional Q for unit d along `a`: log-sum-exp over completions.
double oracle_unit_q(const Table& t, const std::vector<int>& a, int d) {
  std::vector<double> terms;
  for (std::size_t i = 0; i < t.actions.size(); ++i) {
    if (std::equal(a.begin(), a.begin() + d, t.actions[i].begin())) terms.push_back(t.value(i));
  }
  return naive_lse(terms);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Rng rng(mix_seed(kSeed, {1}));
  double worst = 0.0, worst_lib = 0.0;
  for (int c = 0; c < kTheorem1Tables; ++c) {
    Table t = random_table(rng);
    JointQTable lib = to_library(t);
    std::vector<double> z;
    for (std::size_t i = 0; i < t.actions.size(); ++i) z.push_back(t.value(i));
    std::vector<double> joint = naive_softmax(z);
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      const auto& a = t.actions[i];
      double prod = 1.0;
      for (int d = 1; d <= static_cast<int>(a.size()); ++d) {
        std::vector<int> prefix(a.begin(), a.begin() + d - 1);
        std::vector<double> pol = factor_policy(exact_unit_q(lib, d, prefix));
        prod *= pol[a[d - 1]];
      }
      worst = std::max(worst, std::abs(prod - joint[i]));
    }
    worst_lib = std::max(worst_lib, verify_theorem1(lib));
  }
  bool ok = worst <= kTheorem1Tol && worst_lib <= kTheorem1Tol;
  return {ok, std::to_string(kTheorem1Tables) + " tables, max |prod - joint| " +
                  fmt("%.3g", worst) + " (self-check " + fmt("%.3g", worst_lib) + ")"};
}

Outcome criterion2() {
  Rng rng(mix_seed(kSeed, {2}));
  int violations = 0, saturation = 0;
  std::size_t comparisons = 0;
  double worst_gap = 0.0, worst_exact_diff = 0.0;
  for (int c = 0; c < kLowerBoundTables; ++c) {
    Table t = random_table(rng);
    const bool saturate = c % 2 == 1;
    std::size_t pick = rng.below(t.actions.size());
    if (saturate) {
      t.beta = 0.0;
      std::vector<double> rest;
      for (std::size_t i = 0; i < t.q.size(); ++i) {
        if (i != pick) rest.push_back(t.q[i]);
      }
      if (!rest.empty()) t.q[pick] = naive_lse(rest) + kSaturationMargin + rng.uniform();
      ++saturation;
    }
    JointQTable lib = to_library(t);
    const auto& a = t.actions[pick];
    std::vector<double> lb = lb_unit_q(lib, a);
    for (int d = 1; d <= static_cast<int>(a.size()); ++d) {
      double exact = oracle_unit_q(t, a, d);
      std::vector<int> prefix(a.begin(), a.begin() + d - 1);
      worst_exact_diff = std::max(
          worst_exact_diff, std::abs(exact - exact_unit_q(lib, d, prefix).values[a[d - 1]]));
      ++comparisons;
      if (lb[d - 1] > exact + kLowerBoundSlack) ++violations;
      if (saturate) worst_gap = std::max(worst_gap, exact - lb[d - 1]);
    }
  }
  bool ok = violations == 0 && worst_gap <= kSaturationTol && worst_exact_diff <= 1e-12;
  return {ok, std::to_string(kLowerBoundTables) + " tables, " + std::to_string(comparisons) +
                  " comparisons, " + std::to_string(violations) + " violations, " +
                  std::to_string(saturation) + " saturated with max gap " +
                  fmt("%.3g", worst_gap)};
}

// Pure best-response exploitability, computed here from the payoff matrix.
std::pair<double, double> oracle_exploitability(const MatrixGame& g, const std::vector<double>& p1,
                                                const std::vector<double>& p2) {
  const int n1 = static_cast<int>(p1.size()), n2 = static_cast<int>(p2.size());
  double value = 0.0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) value += p1[i] * p2[j] * g.payoff[i * n2 + j];
  }
  double br1 = -1e300, br2 = -1e300;
  for (int i = 0; i < n1; ++i) {
    double v = 0.0;
    for (int j = 0; j < n2; ++j) v += p2[j] * g.payoff[i * n2 + j];
    br1 = std::max(br1, v);
  }
  for (int j = 0; j < n2; ++j) {
    double v = 0.0;
    for (int i = 0; i < n1; ++i) v -= p1[i] * g.payoff[i * n2 + j];
    br2 = std::max(br2, v);
  }
  return {br1 - value, br2 + value};
}

double oracle_delta(const std::vector<double>& tau) {
  double lo = *std::min_element(tau.begin(), tau.end());
  return -std::log(lo);
}

Outcome criterion3() {
  Rng rng(mix_seed(kSeed, {3}));
  struct Case {
    std::string name;
    MatrixGame game;
  };
  std::vector<Case> games = {{"rps", MatrixGame::rock_paper_scissors()}};
  for (int g = 0; g < kTheorem2RandomGames; ++g) {
    games.push_back({"g" + std::to_string(g) + "/uniform", MatrixGame::random_factored(rng, false)});
    games.push_back({"g" + std::to_string(g) + "/skewed", MatrixGame::random_factored(rng, true)});
  }
  int runs = 0, bound_fail = 0, trend_fail = 0, trace_mismatch = 0;
  double worst_margin = -1e300, worst_rise = 0.0, worst_raw_rise = 0.0, worst_fact = 0.0;
  std::string first_failure;
  for (const Case& c : games) {
    for (double beta : {0.05, 0.1}) {
      LabConfig cfg;
      cfg.beta1 = cfg.beta2 = beta;
      cfg.iterations = kTheorem2Iterations;
      cfg.seed = kSeed;
      LabResult r = run_factored_pikl(c.game, cfg);
      ++runs;
      auto [e1, e2] = oracle_exploitability(c.game, r.average1, r.average2);
      const double b1 = beta * oracle_delta(c.game.tau1) + kTheorem2Slack;
      const double b2 = beta * oracle_delta(c.game.tau2) + kTheorem2Slack;
      worst_margin = std::max({worst_margin, e1 - b1, e2 - b2});
      if (e1 > b1 || e2 > b2) {
        ++bound_fail;
        if (first_failure.empty()) first_failure = c.name + " bound";
      }
      // The library trace must agree with the oracle at the final iterate.
      if (std::abs(r.trace.back().expl1 - e1) > 1e-9 || std::abs(r.trace.back().expl2 - e2) > 1e-9) {
        ++trace_mismatch;
      }
      std::vector<double> gap, raw;
      for (const auto& p : r.trace) {
        gap.push_back(p.reg1 + p.reg2);
        raw.push_back(p.expl1 + p.expl2);
      }
      double rise = 0.0, raw_rise = 0.0;
      const std::size_t burn = kTheorem2Iterations / 10;
      if (!moving_average_non_increasing(gap, burn, kTheorem2Window, kTheorem2TrendSlack, &rise)) {
        ++trend_fail;
        if (first_failure.empty()) first_failure = c.name + " trend";
      }
      moving_average_non_increasing(raw, burn, kTheorem2Window, kTheorem2TrendSlack, &raw_rise);
      worst_rise = std::max(worst_rise, rise);
      worst_raw_rise = std::max(worst_raw_rise, raw_rise);
      worst_fact = std::max(worst_fact, r.max_factorization_error);
    }
  }
  bool ok = bound_fail == 0 && trend_fail == 0 && trace_mismatch == 0 && worst_fact <= 1e-9;
  std::string d = std::to_string(runs) + " runs, worst expl - (beta*delta + 0.01) " +
                  fmt("%.3g", worst_margin) + ", regularized-gap rises " +
                  std::to_string(trend_fail) + " (worst " + fmt("%.2g", worst_rise) +
                  "), raw exploitability worst rise " + fmt("%.2g", worst_raw_rise) +
                  " (informational), factorization error " + fmt("%.2g", worst_fact);
  if (trace_mismatch) d += ", trace/oracle mismatches " + std::to_string(trace_mismatch);
  if (!first_failure.empty()) d += ", first failure " + first_failure;
  return {ok, d};
}

Outcome criterion4() {
  Rng rng(mix_seed(kSeed, {4}));
  double shift = 0.0, softmax0 = 0.0, constq = 0.0;
  for (int c = 0; c < kAlgebraCases; ++c) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> q(n), lt(n), w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = 6.0 * rng.uniform() - 3.0;
      total += w[i] = 0.001 + rng.uniform();
    }
    for (std::size_t i = 0; i < n; ++i) lt[i] = std::log(w[i] / total);
    const double beta = 2.0 * rng.uniform();
    auto base = policy_from_q(q, lt, beta);
    std::vector<double> moved = q;
    const double k = 20.0 * rng.uniform() - 10.0;
    for (double& x : moved) x += k;
    auto sp = policy_from_q(moved, lt, beta);
    auto zero = policy_from_q(q, lt, 0.0);
    auto want0 = naive_softmax(q);
    std::vector<double> flat(n, q[0]);
    auto cq = policy_from_q(flat, lt, beta);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += std::pow(w[i] / total, beta);
    for (std::size_t i = 0; i < n; ++i) {
      shift = std::max(shift, std::abs(sp[i] - base[i]));
      softmax0 = std::max(softmax0, std::abs(zero[i] - want0[i]));
      constq = std::max(constq, std::abs(cq[i] - std::pow(w[i] / total, beta) / z));
    }
  }
  bool ok = shift <= kAlgebraTol && softmax0 <= kAlgebraTol && constq <= kAlgebraTol;
  return {ok, std::to_string(kAlgebraCases) + " cases, shift " + fmt("%.2g", shift) +
                  ", beta=0 vs softmax " + fmt("%.2g", softmax0) + ", constant Q vs tau^beta " +
                  fmt("%.2g", constq)};
}

Outcome criterion5() {
  const char* maps[] = {"clique4", "mini5", "ring7", "mini3"};
  Rng rng(mix_seed(kSeed, {5}));
  int profiles = 0, mismatches = 0;
  std::string first;
  for (int k = 0; k < kOracleProfiles; ++k) {
    auto map = testing::map_named(maps[k % 4]);
    GameState s = testing::random_position(map, 4, rng);
    auto joints = testing::random_orders(s, rng);
    std::string diff = testing::oracle_mismatch(s, joints);
    ++profiles;
    if (!diff.empty()) {
      ++mismatches;
      if (first.empty()) first = diff;
    }
  }
  int cases = 0, failed = 0;
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(testing::data_path("cases"))) {
    if (e.path().extension() == ".case") paths.push_back(e.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::string failed_names;
  for (const auto& p : paths) {
    ++cases;
    CaseOutcome out = run_case(load_case(p));
    if (!out.mismatches.empty()) {
      ++failed;
      failed_names += " " + std::filesystem::path(p).stem().string();
    }
  }
  bool ok = mismatches == 0 && failed == 0 && cases >= 5;
  std::string d = std::to_string(profiles) + " random profiles, " + std::to_string(mismatches) +
                  " oracle mismatches; curated " + std::to_string(cases - failed) + "/" +
                  std::to_string(cases);
  if (!first.empty()) d += "; first: " + first;
  if (failed) d += "; failed:" + failed_names;
  return {ok, d};
}

Outcome criterion6() {
  auto eq = sos_score({4, 4, 4, 4, 4, 4, 4});
  bool exact = std::all_of(eq.begin(), eq.end(), [](double x) { return x == 1.0 / 7.0; });
  Rng rng(mix_seed(kSeed, {6}));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<int> c(2 + rng.below(8));
    for (int& x : c) x = static_cast<int>(rng.below(35));
    c[rng.below(c.size())] += 1;
    auto s = sos_score(c);
    double total = 0.0;
    for (double x : s) total += x;
    worst = std::max(worst, std::abs(total - 1.0));
  }
  bool ok = exact && worst <= kSosTol;
  return {ok, std::string("equal counts give 1/7 ") + (exact ? "exactly" : "NOT exactly") +
                  ", 1000 vectors max |sum - 1| " + fmt("%.2g", worst)};
}

Outcome criterion7() {
  auto map = testing::map_named("ring7");
  AgentSpec a = AgentSpec::from_name("anchor_only", *map);
  RunConfig cfg = load_config(testing::data_path("configs/tournament.json"));
  TournamentResult r =
      tournament(map, a, a, kSymmetricGames, make_anchor(cfg.anchor), cfg.play, kSeed);
  bool ok = true;
  std::string d = std::to_string(r.games) + " games on ring7, per-seat SoS:";
  for (PowerId p = 0; p < map->num_powers(); ++p) {
    const Metric& m = r.sos_by_power[p];
    const bool in = std::abs(m.mean - 1.0 / 7.0) <= kSymmetricSe * m.se;
    ok = ok && in;
    d += " " + map->power_name(p) + " " + fmt("%.4f", m.mean) + "+-" + fmt("%.4f", m.se) +
         (in ? "" : "(out)");
  }
  return {ok, d};
}

Outcome criterion8() {
  auto map = testing::map_named("ring7");
  RunConfig cfg = load_config(testing::data_path("configs/tournament.json"));
  AgentSpec pikl = AgentSpec::from_name("pikl", *map);
  pikl.search = cfg.search;
  pikl.act = cfg.act;
  pikl.search_all_powers = cfg.search_all_powers;
  AgentSpec anchor = AgentSpec::from_name("anchor_only", *map);
  TournamentResult r =
      tournament(map, pikl, anchor, kSearchGames, make_anchor(cfg.anchor), cfg.play, kSeed);
  const double need = 1.0 / 7.0 + kSearchSe * r.sos.se;
  bool ok = r.sos.mean > need && cfg.search.iterations == 64 && cfg.search.n_candidates == 16;
  return {ok, std::to_string(r.games) + " games, pikl (T=" + std::to_string(cfg.search.iterations) +
                  ", candidates=" + std::to_string(cfg.search.n_candidates) + ") SoS " +
                  fmt("%.4f", r.sos.mean) + " +- " + fmt("%.4f", r.sos.se) + ", needs > " +
                  fmt("%.4f", need) + "; win " + fmt("%.3f", r.win.mean) + ", defeated " +
                  fmt("%.3f", r.defeated.mean)};
}

std::string generate(std::uint64_t seed, const TransitionObserver& observer, DatasetSummary* sum) {
  RunConfig cfg;
  cfg.seed = seed;
  GenConfig gc;
  gc.search = cfg.search;
  gc.search.seed = seed;
  gc.max_year = cfg.dataset_max_year;
  gc.emit = cfg.emit;
  std::ostringstream out;
  *sum = selfplay_generate(testing::map_named("mini5"), 1, gc, make_anchor(cfg.anchor), out,
                           observer);
  return out.str();
}

Outcome criterion9() {
  int records = 0, weight_bad = 0, problems = 0;
  std::string first;
  DatasetSummary sum;
  std::string text = generate(7, [&](const GameState& s, const UnitTransition& t) {
    ++records;
    if (std::abs(t.weight - std::exp(t.q_value)) > kWeightRelTol * std::exp(t.q_value)) ++weight_bad;
    for (const auto& p : testing::record_problems(transition_to_json(t), s)) {
      ++problems;
      if (first.empty()) first = p;
    }
  }, &sum);
  DatasetSummary again_sum;
  std::string again = generate(7, {}, &again_sum);
  const std::string golden = testing::read_file(testing::data_path("golden/gen_mini5_seed7.jsonl"));
  const bool golden_ok = !golden.empty() && golden == text;
  const bool rerun_ok = again == text;
  bool ok = records > 0 && static_cast<std::size_t>(records) == sum.transitions && weight_bad == 0 &&
            problems == 0 && golden_ok && rerun_ok;
  std::string d = std::to_string(records) + " records, weight-law failures " +
                  std::to_string(weight_bad) + ", record problems " + std::to_string(problems) +
                  ", golden " + (golden_ok ? "match" : "MISMATCH") + ", rerun " +
                  (rerun_ok ? "byte-identical" : "DIFFERS");
  if (!first.empty()) d += "; first problem: " + first;
  return {ok, d};
}

Outcome criterion10() {
  std::string golden = testing::read_file(testing::data_path("golden/ionian_user_prompt.txt"));
  if (!golden.empty() && golden.back() == '\n') golden.pop_back();
  const std::string built = testing::ionian_user_prompt();
  auto want = testing::whitespace_tokens(golden), got = testing::whitespace_tokens(built);
  std::size_t same = 0;
  while (same < want.size() && same < got.size() && want[same] == got[same]) ++same;
  const bool tokens_ok = same == want.size() && same == got.size();
  // The task prompt is the final paragraph; check it on its own as well.
  auto task_of = [](const std::string& s) { return s.substr(s.rfind("\n\n") + 2); };
  const bool task_ok = task_of(built) == task_of(golden);
  bool ok = !want.empty() && tokens_ok && task_ok && built == golden;
  std::string d = std::to_string(got.size()) + " tokens rebuilt, " + std::to_string(same) + "/" +
                  std::to_string(want.size()) + " match; task paragraph " +
                  (task_ok ? "identical" : "DIFFERS") + "; bytes " +
                  (built == golden ? "identical" : "differ");
  if (!tokens_ok && same < want.size()) d += "; first difference at token '" + want[same] + "'";
  return {ok, d};
}

struct Criterion {
  int id;
  const char* name;
  double seconds;  // wall-clock budget; 0 means none
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace dipeq

int main(int argc, char** argv) {
  using namespace dipeq;
  const std::vector<Criterion> all = {
      {1, "theorem1", kTheorem1Seconds, criterion1},
      {2, "lower_bound", kLowerBoundSeconds, criterion2},
      {3, "theorem2", kTheorem2Seconds, criterion3},
      {4, "policy_algebra", 0, criterion4},
      {5, "adjudicator_oracle", kOracleSeconds, criterion5},
      {6, "sos_metric", 0, criterion6},
      {7, "symmetric_tournament", kSymmetricSeconds, criterion7},
      {8, "search_beats_anchor", kSearchSeconds, criterion8},
      {9, "dataset_integrity", 0, criterion9},
      {10, "prompt_fidelity", 0, criterion10},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    bool in_time = c.seconds <= 0 || secs <= c.seconds;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %d %s: %s  [%.1f s%s] %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                in_time ? "" : ", over budget", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dipeq/anchor.hpp"
#include "dipeq/dataset.hpp"
#include "dipeq/error.hpp"
#include "dipeq/search.hpp"
#include "support/ionian.hpp"
#include "support/records.hpp"
#include "support/test_util.hpp"

namespace dipeq {
namespace {

using testing::data_path;
using testing::map_named;
using testing::read_file;

TEST(SystemPrompt, OpensWithTheRole) {
  std::string s = kSystemPrompt;
  EXPECT_EQ(s.rfind("You are an expert in the no-press Diplomacy game environment", 0), 0u);
}

TEST(EncodeState, IonianGoldenMatchesByteForByte) {
  std::string golden = read_file(data_path("golden/ionian_user_prompt.txt"));
  ASSERT_FALSE(golden.empty());
  if (golden.back() == '\n') golden.pop_back();
  EXPECT_EQ(testing::ionian_user_prompt(), golden);
}

TEST(EncodeState, OpeningSectionsForTurkey) {
  auto m = map_named("standard");
  GameState s = initial_state(m);
  std::string text = encode_state_text(s, *m->find_power("Turkey"));
  for (const char* header :
       {"[Game Time and Phase]:\n\n1901 Spring: Diplomacy", "[Board State]:", "Your Power Unit:",
        "Turkey's army:", "Turkey's fleet:", "Turkey's center without units:", "Other Power Unit:",
        "Areas Without Unit:", "[Last Move]:", "Your Power Order:", "Other Power Order:"}) {
    EXPECT_NE(text.find(header), std::string::npos) << header;
  }
  EXPECT_LT(text.find("Your Power Unit:"), text.find("Other Power Unit:"));
  EXPECT_LT(text.find("Your Power Order:"), text.find("Other Power Order:"));
  // No moves yet: every order list reads None.
  std::string last = text.substr(text.find("[Last Move]:"));
  EXPECT_NE(last.find("Turkey:\nNone"), std::string::npos);
  EXPECT_NE(last.find("Austria:\nNone"), std::string::npos);
  EXPECT_EQ(text, encode_state_text(s, *m->find_power("Turkey")));
}

TEST(EncodeState, FallHeaderAndWrongPhase) {
  auto m = map_named("mini3");
  GameState s = initial_state(m);
  s.phase = Phase::kFallMove;
  EXPECT_EQ(encode_state_text(s, 0).rfind("[Game Time and Phase]:\n\n1901 Fall: Diplomacy", 0), 0u);
  s.phase = Phase::kWinterAdjust;
  EXPECT_THROW(encode_state_text(s, 0), PhaseError);
}

TEST(TaskPrompt, EmptyPreviousAndSingleCandidate) {
  auto m = map_named("mini3");
  GameState s = initial_state(m);
  std::vector<Order> c = {parse_order("A WST H", Dialect::kShort, s)};
  const Unit& west = s.units[s.unit_at(m->province_of(*m->find_location("WST")))];
  std::string p = build_task_prompt({}, west, c, *m);
  EXPECT_EQ(p,
            "In this round, the orders you have previously generated are []. The candidate "
            "orders for army in Westmark are [holds]. The best order from candidate orders is "
            "that army in Westmark");
  EXPECT_THROW(build_task_prompt({}, west, {}, *m), Error);
}

TEST(TaskPrompt, CompletionParsesToALegalOrder) {
  GameState s = load_state_file(data_path("fixtures/ionian_1905.state"));
  Order o = parse_order("fleet in Ionian Sea moves to Greece", Dialect::kVerbose, s);
  EXPECT_TRUE(validate_order(o, s).legal);
}

TEST(PromptUnitOrder, ArmiesFirstThenName) {
  GameState s = load_state_file(data_path("fixtures/ionian_1905.state"));
  PowerId turkey = *s.map->find_power("Turkey");
  std::vector<Unit> mine;
  for (const Unit& u : s.units) {
    if (u.owner == turkey) mine.push_back(u);
  }
  std::vector<std::string> names;
  for (int i : prompt_unit_order(mine, *s.map)) {
    names.push_back(render_unit(mine[i].kind, mine[i].loc, *s.map));
  }
  ASSERT_GE(names.size(), 4u);
  EXPECT_EQ(names[0], "army in Bulgaria");
  EXPECT_EQ(names[1], "fleet in Aegean Sea");
  EXPECT_EQ(names[2], "fleet in Black Sea");
  EXPECT_EQ(names[3], "fleet in Ionian Sea");
}

TEST(Records, WeightLawAndFieldOrder) {
  UnitTransition t;
  t.system = kSystemPrompt;
  t.user = "u";
  t.assistant = "holds";
  t.q_value = 1.28;
  t.weight = std::exp(1.28);
  t.power = "West";
  t.unit = "army in Westmark";
  std::string line = transition_to_json(t);
  EXPECT_EQ(line.rfind("{\"system\":", 0), 0u);
  EXPECT_LT(line.find("\"user\":"), line.find("\"assistant\":"));
  EXPECT_LT(line.find("\"assistant\":"), line.find("\"value\":"));
  EXPECT_LT(line.find("\"value\":"), line.find("\"weight\":"));
  EXPECT_LT(line.find("\"weight\":"), line.find("\"meta\":"));
  EXPECT_NE(line.find("\"value\":\"1.28\""), std::string::npos) << line;
  EXPECT_NEAR(std::exp(1.28), 3.5966, 1e-4);
  EXPECT_EQ(line.find('\n'), std::string::npos);
}

TEST(Records, MakeTransitionsOnePerUnit) {
  auto m = map_named("standard");
  GameState s = initial_state(m);
  SearchConfig c;
  c.iterations = 4;
  c.n_candidates = 4;
  c.rollouts = 1;
  c.horizon = 0;
  PowerId russia = *m->find_power("Russia");
  SearchResult r = run_pikl(s, c, AnchorPolicy::heuristic(), {russia});
  const PowerSearch& ps = r.powers[0];
  auto ts = make_transitions(s, ps, 0, c.beta);
  ASSERT_EQ(ts.size(), 4u);
  for (std::size_t d = 0; d < ts.size(); ++d) {
    EXPECT_EQ(ts[d].unit_index, static_cast<int>(d) + 1);
    EXPECT_EQ(ts[d].units, 4);
    EXPECT_DOUBLE_EQ(ts[d].q_value, ps.mean_q[0] + c.beta * ps.anchor_logprob[0]);
    EXPECT_EQ(ts[d].weight, std::exp(ts[d].q_value));
    auto problems = testing::record_problems(transition_to_json(ts[d]), s);
    for (const auto& p : problems) ADD_FAILURE() << p;
  }
  EXPECT_THROW(make_transitions(s, ps, 99, c.beta), Error);
  EmitOptions tiny;
  tiny.max_chars = 100;
  EXPECT_THROW(make_transitions(s, ps, 0, c.beta, tiny), Error);
}

TEST(SelfPlay, RecordsAreConsistentAndReproducible) {
  auto m = map_named("mini5");
  GenConfig gc;
  gc.search.iterations = 16;
  gc.search.n_candidates = 8;
  gc.search.rollouts = 2;
  gc.search.horizon = 1;
  gc.search.seed = 3;
  AnchorPolicy a = AnchorPolicy::heuristic();
  std::ostringstream first, second;
  std::size_t observed = 0;
  std::map<std::string, int> per_phase_power;
  DatasetSummary sum = selfplay_generate(m, 1, gc, a, first,
                                         [&](const GameState& s, const UnitTransition& t) {
                                           ++observed;
                                           for (const auto& p : testing::record_problems(
                                                    transition_to_json(t), s)) {
                                             ADD_FAILURE() << p;
                                           }
                                           std::string key = std::to_string(s.year) +
                                                             phase_name(s.phase) + t.power;
                                           per_phase_power[key] = t.units;
                                         });
  DatasetSummary again = selfplay_generate(m, 1, gc, a, second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(sum.transitions, again.transitions);
  EXPECT_EQ(sum.transitions, observed);
  std::size_t recount = 0;
  for (auto& [k, d] : per_phase_power) recount += d;
  EXPECT_EQ(recount, sum.transitions);
  const std::string text = first.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            sum.transitions);
  EXPECT_EQ(sum.games, 1);
  EXPECT_GT(sum.phases, 0);
}

}  // namespace
}  // namespace dipeq

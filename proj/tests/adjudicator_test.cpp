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

#include <algorithm>
#include <filesystem>

#include "dipeq/adjudicator.hpp"
#include "dipeq/case_file.hpp"
#include "dipeq/error.hpp"
#include "dipeq/orders.hpp"
#include "support/brute_force.hpp"
#include "support/test_util.hpp"

namespace dipeq {
namespace {

using testing::data_path;
using testing::map_named;

std::vector<JointAction> orders_from(const GameState& s,
                                     std::vector<std::pair<std::string, std::string>> items) {
  std::vector<JointAction> out(s.map->num_powers());
  for (PowerId p = 0; p < s.map->num_powers(); ++p) out[p].power = p;
  for (auto& [power, text] : items) {
    PowerId p = *s.map->find_power(power);
    out[p].orders.push_back(parse_order(text, Dialect::kShort, s));
  }
  return out;
}

bool has_unit(const GameState& s, const char* loc) {
  int p = s.map->province_of(*s.map->find_location(loc));
  return s.unit_at(p) >= 0;
}

TEST(CuratedCases, AllPass) {
  int n = 0;
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(data_path("cases"))) {
    if (e.path().extension() == ".case") paths.push_back(e.path().string());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    SCOPED_TRACE(path);
    AdjudicationCase c = load_case(path);
    ASSERT_TRUE(c.expect.has_value());
    CaseOutcome out = run_case(c);
    for (const auto& m : out.mismatches) ADD_FAILURE() << m;
    ++n;
  }
  EXPECT_GE(n, 10);
}

TEST(Adjudicator, PlainBounce) {
  GameState s = parse_state(
      "year 1901\nphase spring_move\nunit France A PAR\nunit Germany A MUN\n", map_named("standard"));
  Resolution r = adjudicate_moves(s, orders_from(s, {{"France", "A PAR - BUR"},
                                                     {"Germany", "A MUN - BUR"}}));
  EXPECT_FALSE(has_unit(r.new_state, "BUR"));
  EXPECT_TRUE(has_unit(r.new_state, "PAR"));
  EXPECT_TRUE(has_unit(r.new_state, "MUN"));
}

TEST(Adjudicator, SupportCutFromThirdProvince) {
  GameState s = parse_state(
      "year 1901\nphase spring_move\nunit France A PAR\nunit France A MAR\n"
      "unit Germany A MUN\nunit Italy A PIE\n",
      map_named("standard"));
  Resolution r = adjudicate_moves(
      s, orders_from(s, {{"France", "A PAR - BUR"}, {"France", "A MAR S A PAR - BUR"},
                         {"Germany", "A MUN - BUR"}, {"Italy", "A PIE - MAR"}}));
  EXPECT_FALSE(has_unit(r.new_state, "BUR"));
  EXPECT_TRUE(r.dislodgements.empty());
}

TEST(Adjudicator, UnopposedMoveSucceeds) {
  GameState s = initial_state(map_named("mini3"));
  GameState n = step(s, orders_from(s, {{"West", "A WST - MID"}}));
  EXPECT_TRUE(has_unit(n, "MID"));
  EXPECT_EQ(n.phase, Phase::kFallMove);  // empty retreat phase skipped
}

TEST(Adjudicator, IllegalOrderIsCoercedAndLogged) {
  GameState s = initial_state(map_named("mini3"));
  std::vector<JointAction> j(2);
  j[0].power = 0;
  j[0].orders.push_back(Order::move(UnitKind::kArmy, *s.map->find_location("WST"),
                                    *s.map->find_location("EST")));
  j[1].power = 1;
  Resolution r = adjudicate_moves(s, j);
  ASSERT_EQ(r.coercions.size(), 1u);
  EXPECT_EQ(r.orders[s.unit_at(s.map->province_of(*s.map->find_location("WST")))].type,
            OrderType::kHold);
  EXPECT_TRUE(has_unit(r.new_state, "WST"));
}

TEST(Adjudicator, WrongPhaseThrows) {
  GameState s = initial_state(map_named("mini3"));
  s.phase = Phase::kWinterAdjust;
  EXPECT_THROW(adjudicate_moves(s, {}), PhaseError);
  GameState t = initial_state(map_named("mini3"));
  EXPECT_THROW(adjudicate_builds(t, {}), PhaseError);
  EXPECT_THROW(adjudicate_retreats(t, {}), PhaseError);
}

// A dislodged unit recorded with its attacker origin and retreat options.
GameState retreat_fixture() {
  auto m = map_named("standard");
  GameState s = parse_state(
      "year 1901\nphase spring_move\nunit Germany A MUN\nunit Germany A BER\n"
      "unit France A BUR\nunit France A RUH\nunit Austria A TYR\nunit Austria A BOH\n",
      m);
  Resolution r = adjudicate_moves(
      s, orders_from(s, {{"France", "A BUR - MUN"}, {"France", "A RUH S A BUR - MUN"},
                         {"Austria", "A TYR - MUN"}, {"Austria", "A BOH S A TYR - MUN"},
                         {"Germany", "A MUN H"}, {"Germany", "A BER H"}}));
  return r.new_state;
}

TEST(Retreats, BalancedAttackBouncesAndNobodyIsDislodged) {
  GameState s = retreat_fixture();
  EXPECT_TRUE(s.dislodged.empty());
}

TEST(Retreats, SurviveConflictAndOmission) {
  auto m = map_named("standard");
  GameState s = parse_state(
      "year 1901\nphase spring_move\nunit Germany A MUN\nunit Germany A KIE\n"
      "unit France A BUR\nunit France A RUH\nunit Italy A TYR\nunit Italy A VEN\n"
      "unit Austria A BOH\n",
      m);
  // Supported attack from BUR dislodges MUN.
  Resolution r = adjudicate_moves(
      s, orders_from(s, {{"France", "A BUR - MUN"}, {"France", "A RUH S A BUR - MUN"},
                         {"Germany", "A MUN H"}, {"Germany", "A KIE H"},
                         {"Italy", "A TYR H"}, {"Italy", "A VEN H"},
                         {"Austria", "A BOH H"}}));
  ASSERT_EQ(r.new_state.dislodged.size(), 1u);
  const DislodgedUnit& d = r.new_state.dislodged[0];
  EXPECT_EQ(m->province(d.attacker_origin).id, "BUR");
  for (Loc l : d.retreats) {
    EXPECT_NE(m->location(l).id, "BUR");
    EXPECT_FALSE(has_unit(r.new_state, m->location(l).id.c_str()));
  }
  Loc sil = *m->find_location("SIL");
  ASSERT_NE(std::find(d.retreats.begin(), d.retreats.end(), sil), d.retreats.end());
  // Ordered retreat survives.
  std::vector<JointAction> ro(m->num_powers());
  PowerId germany = *m->find_power("Germany");
  ro[germany] = {germany, {Order::retreat(UnitKind::kArmy, d.unit.loc, sil)}};
  GameState after = adjudicate_retreats(r.new_state, ro);
  EXPECT_TRUE(has_unit(after, "SIL"));
  // Omitted retreat disbands.
  GameState gone = adjudicate_retreats(r.new_state, {});
  EXPECT_EQ(gone.unit_count(germany), 1);
}

TEST(Retreats, TwoUnitsSameDestinationBothDisband) {
  auto m = map_named("mini5");
  GameState s = parse_state(
      "year 1901\nphase spring_retreat\nunit South A CEN\nunit South F SEA\n"
      "dislodged North A NOR from CEN retreats EAS\n"
      "dislodged North F SOU from SEA retreats EAS\n",
      m);
  std::vector<JointAction> ro(2);
  ro[0] = {0, {Order::retreat(UnitKind::kArmy, *m->find_location("NOR"), *m->find_location("EAS")),
               Order::retreat(UnitKind::kFleet, *m->find_location("SOU"),
                              *m->find_location("EAS"))}};
  ro[1].power = 1;
  GameState after = adjudicate_retreats(s, ro);
  EXPECT_EQ(after.unit_count(0), 0);
  EXPECT_FALSE(has_unit(after, "EAS"));
}

TEST(Builds, BuildWaiveAndCoercion) {
  auto m = map_named("standard");
  GameState s = parse_state(
      "year 1901\nphase winter_adjust\nunit Germany A MUN\nunit Germany F KIE\n", m);
  PowerId germany = *m->find_power("Germany");
  EXPECT_EQ(adjustment_delta(s, germany), 1);
  std::vector<JointAction> b(m->num_powers());
  for (PowerId p = 0; p < m->num_powers(); ++p) b[p].power = p;
  b[germany].orders = {Order::build(UnitKind::kArmy, *m->find_location("BER"))};
  GameState built = adjudicate_builds(s, b);
  EXPECT_TRUE(has_unit(built, "BER"));
  EXPECT_EQ(built.phase, Phase::kSpringMove);
  EXPECT_EQ(built.year, 1902);

  b[germany].orders = {Order::waive()};
  EXPECT_EQ(adjudicate_builds(s, b).unit_count(germany), 2);

  // Occupied home center: coerced to a waive and logged.
  b[germany].orders = {Order::build(UnitKind::kArmy, *m->find_location("MUN"))};
  std::vector<Coercion> log;
  GameState coerced = adjudicate_builds(s, b, &log);
  EXPECT_EQ(coerced.unit_count(germany), 2);
  EXPECT_EQ(log.size(), 1u);
}

TEST(Builds, AutoDisbandPicksFarthestUnit) {
  auto m = map_named("standard");
  GameState s = parse_state(
      "year 1901\nphase winter_adjust\nowner BUD neutral\nowner TRI neutral\n"
      "unit Austria A VIE\nunit Austria A UKR\n",
      m);
  PowerId austria = *m->find_power("Austria");
  int idx = auto_disband_choice(s, austria);
  EXPECT_EQ(m->location(s.units[idx].loc).id, "UKR");
}

TEST(Step, FallUpdatesOwnershipThenWinterThenSpring) {
  auto m = map_named("mini3");
  GameState s = initial_state(m);
  s.phase = Phase::kFallMove;
  GameState w = step(s, orders_from(s, {{"West", "A WST - MID"}}));
  EXPECT_EQ(w.phase, Phase::kWinterAdjust);
  EXPECT_EQ(w.sc_owner[m->province_of(*m->find_location("MID"))], *m->find_power("West"));
  GameState next = step(w, {});
  EXPECT_EQ(next.phase, Phase::kSpringMove);
  EXPECT_EQ(next.year, 1902);
}

TEST(Step, SpringDoesNotChangeOwnership) {
  auto m = map_named("mini3");
  GameState s = initial_state(m);
  GameState f = step(s, orders_from(s, {{"West", "A WST - MID"}}));
  EXPECT_EQ(f.sc_owner[m->province_of(*m->find_location("MID"))], kNeutral);
}

TEST(SoloWinner, ThresholdIsMajority) {
  auto m = map_named("mini3");
  GameState s = initial_state(m);
  EXPECT_EQ(solo_winner(s), kNeutral);
  s.sc_owner[m->province_of(*m->find_location("MID"))] = 0;
  EXPECT_EQ(solo_winner(s), 0);
}

class RandomProfiles : public ::testing::TestWithParam<const char*> {};

TEST_P(RandomProfiles, MatchOracleAndKeepInvariants) {
  auto m = map_named(GetParam());
  Rng rng(mix_seed(23, {static_cast<std::uint64_t>(m->num_provinces())}));
  for (int trial = 0; trial < 1500; ++trial) {
    GameState s = testing::random_position(m, 4, rng);
    auto joints = testing::random_orders(s, rng);
    std::string diff = testing::oracle_mismatch(s, joints);
    ASSERT_TRUE(diff.empty()) << diff;

    Resolution a = adjudicate_moves(s, joints);
    // Unit conservation and occupancy.
    EXPECT_EQ(a.new_state.units.size() + a.new_state.dislodged.size(), s.units.size());
    EXPECT_NO_THROW(check_invariants(a.new_state));
    // Supplying powers in another order changes nothing.
    auto shuffled = joints;
    std::reverse(shuffled.begin(), shuffled.end());
    Resolution b = adjudicate_moves(s, shuffled);
    EXPECT_EQ(serialize_state(a.new_state), serialize_state(b.new_state));
    EXPECT_EQ(a.succeeded, b.succeeded);
  }
}

INSTANTIATE_TEST_SUITE_P(MiniMaps, RandomProfiles,
                         ::testing::Values("clique4", "mini5", "ring7", "mini3"));

}  // namespace
}  // namespace dipeq

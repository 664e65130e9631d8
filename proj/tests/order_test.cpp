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
#include <map>
#include <set>

#include "dipeq/error.hpp"
#include "dipeq/order.hpp"
#include "dipeq/orders.hpp"
#include "dipeq/state.hpp"
#include "support/test_util.hpp"

namespace dipeq {
namespace {

using testing::data_path;
using testing::map_named;
using testing::read_tsv;
using testing::split;

OrderType type_from(const std::string& s) {
  static const std::map<std::string, OrderType> kTypes = {
      {"hold", OrderType::kHold},           {"move", OrderType::kMove},
      {"support_hold", OrderType::kSupportHold}, {"support_move", OrderType::kSupportMove},
      {"retreat", OrderType::kRetreat},     {"disband", OrderType::kDisband},
      {"build", OrderType::kBuild},         {"waive", OrderType::kWaive}};
  return kTypes.at(s);
}

Loc loc_from(const std::string& s, const MapSpec& m) {
  if (s == "-") return kNoLoc;
  auto l = m.find_location(s);
  if (!l) throw std::runtime_error("corpus names unknown location " + s);
  return *l;
}

TEST(OrderCorpus, ParsesToExpectedOrders) {
  auto m = map_named("standard");
  auto rows = read_tsv(data_path("corpus/orders_standard.tsv"));
  ASSERT_GE(rows.size(), 25u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 3u);
    SCOPED_TRACE(row[1]);
    auto f = split(row[2], ' ');
    ASSERT_EQ(f.size(), 6u);
    Order want;
    want.type = type_from(f[0]);
    want.kind = f[1] == "F" ? UnitKind::kFleet : UnitKind::kArmy;
    want.actor = loc_from(f[2], *m);
    want.dest = loc_from(f[3], *m);
    want.target_kind = f[4] == "F" ? UnitKind::kFleet : UnitKind::kArmy;
    want.target = loc_from(f[5], *m);
    if (want.type == OrderType::kWaive) want = Order::waive();
    Dialect d = row[0] == "short" ? Dialect::kShort : Dialect::kVerbose;
    Order got = parse_order_text(row[1], d, *m);
    EXPECT_EQ(got, want) << render_order(got, Dialect::kShort, *m);
    // Rendering then parsing again is stable in both dialects.
    for (Dialect out : {Dialect::kShort, Dialect::kVerbose}) {
      EXPECT_EQ(parse_order_text(render_order(got, out, *m), out, *m), got);
    }
  }
}

TEST(OrderCorpus, MalformedInputsRaiseTypedErrors) {
  auto m = map_named("standard");
  auto rows = read_tsv(data_path("corpus/malformed_orders.tsv"));
  ASSERT_GE(rows.size(), 30u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 3u);
    SCOPED_TRACE("'" + row[1] + "'");
    Dialect d = row[0] == "short" ? Dialect::kShort : Dialect::kVerbose;
    try {
      Order o = parse_order_text(row[1], d, *m);
      ADD_FAILURE() << "parsed as " << render_order(o, Dialect::kShort, *m);
    } catch (const OrderParseError& e) {
      auto want = row[2] == "syntax" ? OrderParseError::Reason::kSyntax
                                     : OrderParseError::Reason::kUnknownProvince;
      EXPECT_EQ(e.reason(), want) << e.what();
    }
  }
}

TEST(Order, RenderExamples) {
  auto m = map_named("standard");
  Loc mao = *m->find_location("MAO"), por = *m->find_location("POR");
  Loc par = *m->find_location("PAR");
  EXPECT_EQ(render_order(Order::move(UnitKind::kFleet, mao, por), Dialect::kVerbose, *m),
            "fleet in Mid Atlantic Ocean moves to Portugal");
  EXPECT_EQ(render_order(Order::hold(UnitKind::kArmy, par), Dialect::kShort, *m), "A PAR H");
  EXPECT_EQ(render_order(Order::waive(), Dialect::kShort, *m), "WAIVE");
}

TEST(Order, ParseAgainstStateChecksTheUnit) {
  GameState s = initial_state(map_named("standard"));
  EXPECT_NO_THROW(parse_order("A PAR - BUR", Dialect::kShort, s));
  try {
    parse_order("F PAR - BUR", Dialect::kShort, s);
    FAIL();
  } catch (const OrderParseError& e) {
    EXPECT_EQ(e.reason(), OrderParseError::Reason::kNoUnit);
  }
  EXPECT_THROW(parse_order("A BUR - PAR", Dialect::kShort, s), OrderParseError);
}

TEST(Order, RoundTripOverRandomLegalOrders) {
  Rng rng(11);
  for (const char* name : {"mini3", "mini5", "ring7", "clique4", "standard"}) {
    auto m = map_named(name);
    for (int trial = 0; trial < 60; ++trial) {
      GameState s = testing::random_position(m, 6, rng);
      for (int i = 0; i < static_cast<int>(s.units.size()); ++i) {
        for (const Order& o : legal_unit_orders(s, i)) {
          for (Dialect d : {Dialect::kShort, Dialect::kVerbose}) {
            std::string text = render_order(o, d, *m);
            EXPECT_EQ(parse_order(text, d, s), o) << name << ": " << text;
          }
        }
      }
    }
  }
}

TEST(Order, CanonicalJointSerializationIsStable) {
  GameState s = initial_state(map_named("standard"));
  PowerId france = *s.map->find_power("France");
  JointAction j{france, {}};
  for (int i = static_cast<int>(s.units.size()) - 1; i >= 0; --i) {
    if (s.units[i].owner == france) j.orders.push_back(legal_unit_orders(s, i).back());
  }
  JointAction k = j;
  std::reverse(k.orders.begin(), k.orders.end());
  sort_canonical(j.orders, *s.map);
  sort_canonical(k.orders, *s.map);
  EXPECT_EQ(render_joint(j, Dialect::kShort, *s.map), render_joint(k, Dialect::kShort, *s.map));
}

// Fleets on the standard map with a split-coast destination.
TEST(Order, FleetMoveToSplitCoastResolves) {
  auto m = map_named("standard");
  GameState s = parse_state("year 1901\nphase spring_move\nunit France F GAS\n", m);
  Order o = parse_order("F GAS - SPA", Dialect::kShort, s);
  EXPECT_EQ(o.dest, *m->find_location("SPA/NC"));
}

TEST(LegalOrders, IonianFleetCandidates) {
  GameState s = load_state_file(data_path("fixtures/ionian_1905.state"));
  const MapSpec& m = *s.map;
  int ion = s.unit_at(m.province_of(*m.find_location("ION")));
  ASSERT_GE(ion, 0);
  std::set<std::string> tails;
  for (const Order& o : legal_unit_orders(s, ion)) tails.insert(render_order_tail(o, m));
  for (const char* want : {"moves to Adriatic Sea", "moves to Greece", "moves to Naples",
                           "moves to Tunisia", "supports army in Bulgaria move to Greece"}) {
    EXPECT_TRUE(tails.count(want)) << want;
  }
  EXPECT_TRUE(tails.count("holds"));
}

TEST(LegalOrders, IsolatedUnitOnlyHolds) {
  const char* text =
      "[powers]\nWest East\n[provinces]\n"
      "WST land sc West Westmark\nEST land sc East Eastmark\n"
      "[start]\nWest A WST\nEast A EST\n";
  auto m = std::make_shared<const MapSpec>(load_map(text));
  GameState s = initial_state(m);
  auto orders = legal_unit_orders(s, 0);
  ASSERT_EQ(orders.size(), 1u);
  EXPECT_EQ(orders[0].type, OrderType::kHold);
}

TEST(LegalOrders, MovesFollowKindAdjacencyAndSupportsNeedReach) {
  Rng rng(3);
  auto m = map_named("standard");
  int checked = 0;
  while (checked < 100) {
    GameState s = testing::random_position(m, 12, rng);
    for (int i = 0; i < static_cast<int>(s.units.size()) && checked < 100; ++i, ++checked) {
      const Unit& u = s.units[i];
      for (const Order& o : legal_unit_orders(s, i)) {
        if (o.type == OrderType::kMove) {
          const auto& adj = m->adjacent(u.kind, u.loc);
          EXPECT_NE(std::find(adj.begin(), adj.end(), o.dest), adj.end());
        }
        if (o.type == OrderType::kSupportMove) {
          EXPECT_TRUE(m->reaches(u.kind, u.loc, m->province_of(o.dest)));
        }
      }
    }
  }
}

TEST(LegalOrders, DeterministicAndSorted) {
  GameState s = initial_state(map_named("standard"));
  for (PowerId p = 0; p < s.map->num_powers(); ++p) {
    auto a = legal_orders(s, p);
    auto b = legal_orders(s, p);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].orders, b[i].orders);
      EXPECT_TRUE(std::is_sorted(a[i].orders.begin(), a[i].orders.end(),
                                 [&](const Order& x, const Order& y) {
                                   return candidate_less(x, y, *s.map);
                                 }));
    }
  }
}

TEST(LegalOrders, WrongPhaseThrows) {
  GameState s = initial_state(map_named("mini3"));
  s.phase = Phase::kWinterAdjust;
  EXPECT_THROW(legal_orders(s, 0), PhaseError);
}

// Every syntactically possible order is legal exactly when it is listed.
TEST(LegalOrders, ClosureAgainstValidationOnMiniMaps) {
  Rng rng(17);
  for (const char* name : {"mini3", "mini5", "ring7", "clique4"}) {
    auto m = map_named(name);
    for (int trial = 0; trial < 40; ++trial) {
      GameState s = testing::random_position(m, 5, rng);
      for (int i = 0; i < static_cast<int>(s.units.size()); ++i) {
        const Unit& u = s.units[i];
        auto legal = legal_unit_orders(s, i);
        std::vector<Order> all = {Order::hold(u.kind, u.loc)};
        for (Loc a = 0; a < m->num_locations(); ++a) {
          all.push_back(Order::move(u.kind, u.loc, a));
          for (UnitKind tk : {UnitKind::kArmy, UnitKind::kFleet}) {
            int tp = m->province_of(a);
            if (a != tp) continue;
            all.push_back(Order::support_hold(u.kind, u.loc, tk, tp));
            for (int dp = 0; dp < m->num_provinces(); ++dp) {
              all.push_back(Order::support_move(u.kind, u.loc, tk, tp, dp));
            }
          }
        }
        for (const Order& o : all) {
          bool listed = std::find(legal.begin(), legal.end(), o) != legal.end();
          EXPECT_EQ(validate_order(o, s).legal, listed)
              << name << ": " << render_order(o, Dialect::kShort, *m);
        }
      }
    }
  }
}

TEST(ValidateOrder, Examples) {
  auto m = map_named("standard");
  GameState s = parse_state(
      "year 1901\nphase spring_move\nunit France A PAR\nunit France A MAR\nunit Germany A MUN\n",
      m);
  auto order = [&](const char* t) { return parse_order(t, Dialect::kShort, s); };
  EXPECT_TRUE(validate_order(order("A PAR H"), s).legal);
  EXPECT_FALSE(validate_order(Order::move(UnitKind::kArmy, *m->find_location("PAR"),
                                          *m->find_location("ENG")),
                              s)
                   .legal);
  // MAR cannot reach RUH, so it cannot support a move there.
  EXPECT_FALSE(validate_order(order("A MAR S A MUN - RUH"), s).legal);
  EXPECT_TRUE(validate_order(order("A MAR S A PAR - BUR"), s).legal);
}

}  // namespace
}  // namespace dipeq

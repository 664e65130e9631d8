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

#include "dipeq/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dipeq/adjudicator.hpp"
#include "dipeq/error.hpp"
#include "dipeq/factorizer.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace dipeq {

const char kSystemPrompt[] =
    "You are an expert in the no-press Diplomacy game environment. As one of seven powers, your "
    "task is to use your army and fleet to control the supply centers on the board. You are "
    "playing [Your Power] and observing [Game Time and Phase], [Board State], and [Last Moves] "
    "below. In the [Board State], each power will sequentially display the locations of its army "
    "and fleet. Remember, unless specified otherwise, we will omit the default attributes for "
    "areas, which include the coast, neither supply center nor home center, no troops dislodged, "
    "and not occupied by anyone.";

namespace {

// Attributes every area listing shares: terrain unless coastal, then the
// coasts of split provinces.
std::vector<std::string> base_attrs(const ProvinceSpec& p) {
  std::vector<std::string> attrs;
  if (p.terrain == Terrain::kLand) attrs.push_back("land");
  if (p.terrain == Terrain::kWater) attrs.push_back("water");
  if (p.coasts.size() >= 2) {
    std::string s = "including ";
    for (std::size_t i = 0; i < p.coasts.size(); ++i) {
      if (i > 0) s += i + 1 == p.coasts.size() ? " and " : ", ";
      s += p.coasts[i].name;
    }
    attrs.push_back(s + " Coast");
  }
  return attrs;
}

std::string with_attrs(const std::string& name, const std::vector<std::string>& attrs) {
  if (attrs.empty()) return name;
  return name + " (" + text::join(attrs, ", ") + ")";
}

std::string listing(std::vector<std::pair<std::string, std::string>> items) {
  // Sorted by area name; the second field is the rendered entry.
  if (items.empty()) return "None";
  std::sort(items.begin(), items.end());
  std::vector<std::string> out;
  for (auto& it : items) out.push_back(std::move(it.second));
  return text::join(out, ", ");
}

std::string power_units(const GameState& s, PowerId power) {
  const MapSpec& m = *s.map;
  const std::string& name = m.power_name(power);
  std::vector<std::pair<std::string, std::string>> armies, fleets, empty_centers;
  std::vector<char> occupied(m.num_provinces(), 0);
  for (const Unit& u : s.units) occupied[m.province_of(u.loc)] = 1;
  for (const Unit& u : s.units) {
    if (u.owner != power) continue;
    const int p = m.province_of(u.loc);
    const ProvinceSpec& ps = m.province(p);
    auto attrs = base_attrs(ps);
    if (m.is_supply_center(p)) {
      const PowerId o = s.sc_owner[p];
      attrs.push_back(o == kNeutral ? "supply center" : m.power_name(o) + "'s supply center");
    }
    auto& list = u.kind == UnitKind::kArmy ? armies : fleets;
    list.emplace_back(ps.long_name, with_attrs(ps.long_name, attrs));
  }
  for (int p : m.supply_centers()) {
    if (s.sc_owner[p] == power && !occupied[p]) {
      empty_centers.emplace_back(m.province(p).long_name, m.province(p).long_name);
    }
  }
  return name + "'s army:\n" + listing(armies) + "\n\n" + name + "'s fleet:\n" + listing(fleets) +
         "\n\n" + name + "'s center without units:\n" + listing(empty_centers);
}

std::string power_orders(const GameState& s, PowerId power) {
  const MapSpec& m = *s.map;
  std::vector<std::string> rendered;
  if (power < static_cast<int>(s.last_orders.size())) {
    for (const Order& o : s.last_orders[power]) rendered.push_back(render_order(o, Dialect::kVerbose, m));
  }
  std::sort(rendered.begin(), rendered.end());
  return m.power_name(power) + ":\n" + (rendered.empty() ? "None" : text::join(rendered, ", "));
}

}  // namespace

std::string encode_state_text(const GameState& s, PowerId power) {
  if (!is_move_phase(s.phase)) throw PhaseError("state text is defined for move phases only");
  const MapSpec& m = *s.map;
  if (power < 0 || power >= m.num_powers()) throw Error("power out of range");
  std::vector<std::string> para;
  para.push_back("[Game Time and Phase]:");
  para.push_back(std::to_string(s.year) +
                 (s.phase == Phase::kSpringMove ? " Spring: Diplomacy" : " Fall: Diplomacy"));
  para.push_back("[Board State]:");
  para.push_back("Your Power Unit:");
  para.push_back(power_units(s, power));
  para.push_back("Other Power Unit:");
  for (PowerId p = 0; p < m.num_powers(); ++p) {
    if (p != power) para.push_back(power_units(s, p));
  }

  para.push_back("Areas Without Unit:");
  std::vector<char> occupied(m.num_provinces(), 0);
  for (const Unit& u : s.units) occupied[m.province_of(u.loc)] = 1;
  std::vector<std::pair<std::string, std::string>> free_sc, owned_sc, other;
  for (int p = 0; p < m.num_provinces(); ++p) {
    if (occupied[p]) continue;
    const ProvinceSpec& ps = m.province(p);
    auto attrs = base_attrs(ps);
    if (!m.is_supply_center(p)) {
      other.emplace_back(ps.long_name, with_attrs(ps.long_name, attrs));
    } else if (s.sc_owner[p] == kNeutral) {
      free_sc.emplace_back(ps.long_name, with_attrs(ps.long_name, attrs));
    } else {
      attrs.push_back(m.power_name(s.sc_owner[p]) + "'s");
      owned_sc.emplace_back(ps.long_name, with_attrs(ps.long_name, attrs));
    }
  }
  para.push_back("unoccupied supply center:\n" + listing(free_sc));
  para.push_back("occupied supply center:\n" + listing(owned_sc));
  para.push_back("not supply center:\n" + listing(other));

  para.push_back("[Last Move]:");
  para.push_back("Your Power Order:");
  para.push_back(power_orders(s, power));
  para.push_back("Other Power Order:");
  for (PowerId p = 0; p < m.num_powers(); ++p) {
    if (p != power) para.push_back(power_orders(s, p));
  }
  return text::join(para, "\n\n");
}

std::string build_task_prompt(const std::vector<std::string>& previous, const Unit& unit,
                              const std::vector<Order>& candidates, const MapSpec& m) {
  if (candidates.empty()) throw Error("task prompt needs at least one candidate");
  std::vector<std::string> tails;
  for (const Order& o : candidates) tails.push_back(render_order_tail(o, m));
  const std::string name = render_unit(unit.kind, unit.loc, m);
  return "In this round, the orders you have previously generated are [" +
         text::join(previous, ", ") + "]. The candidate orders for " + name + " are [" +
         text::join(tails, ", ") + "]. The best order from candidate orders is that " + name;
}

std::vector<int> prompt_unit_order(const std::vector<Unit>& units, const MapSpec& m) {
  std::vector<int> idx(units.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (units[a].kind != units[b].kind) return units[a].kind == UnitKind::kArmy;
    return m.location(units[a].loc).display < m.location(units[b].loc).display;
  });
  return idx;
}

std::string transition_to_json(const UnitTransition& t) {
  using nlohmann::json;
  std::string out = "{\"system\":" + json(t.system).dump();
  out += ",\"user\":" + json(t.user).dump();
  out += ",\"assistant\":" + json(t.assistant).dump();
  out += ",\"value\":" + json(text::format_real(t.q_value)).dump();
  out += ",\"weight\":" + text::format_real(t.weight);
  out += ",\"meta\":{\"game\":" + std::to_string(t.game);
  out += ",\"year\":" + std::to_string(t.year);
  out += ",\"phase\":" + json(phase_name(t.phase)).dump();
  out += ",\"power\":" + json(t.power).dump();
  out += ",\"unit_index\":" + std::to_string(t.unit_index);
  out += ",\"units\":" + std::to_string(t.units);
  out += ",\"unit\":" + json(t.unit).dump();
  out += ",\"seed\":" + std::to_string(t.seed) + "}}";
  return out;
}

std::vector<UnitTransition> make_transitions(const GameState& s, const PowerSearch& ps,
                                             int selected, double beta,
                                             const EmitOptions& options) {
  const MapSpec& m = *s.map;
  const auto& c = ps.candidates;
  if (selected < 0 || selected >= static_cast<int>(c.joints.size())) {
    throw Error("selected joint action is not a search candidate");
  }
  const JointAction& joint = c.joints[selected];
  const int D = static_cast<int>(c.units.size());
  const auto lb = lb_unit_q(ps.mean_q[selected], ps.anchor_logprob[selected], beta, D);
  const std::string state_text = encode_state_text(s, ps.power);
  std::vector<UnitTransition> out;
  std::vector<std::string> previous;
  int d = 0;
  for (int u : prompt_unit_order(c.units, m)) {
    UnitTransition t;
    t.system = kSystemPrompt;
    t.user = state_text + "\n\n" + build_task_prompt(previous, c.units[u], c.top_orders[u], m);
    t.assistant = render_order_tail(joint.orders[u], m);
    t.q_value = lb[d];
    t.weight = std::exp(t.q_value);
    t.year = s.year;
    t.phase = s.phase;
    t.power = m.power_name(ps.power);
    t.unit_index = ++d;
    t.units = D;
    t.unit = render_unit(c.units[u].kind, c.units[u].loc, m);
    if (t.system.size() + t.user.size() + t.assistant.size() > options.max_chars) {
      throw Error("record for " + t.unit + " exceeds the " + std::to_string(options.max_chars) +
                  "-character budget");
    }
    previous.push_back(render_order(joint.orders[u], Dialect::kVerbose, m));
    out.push_back(std::move(t));
  }
  return out;
}

DatasetSummary selfplay_generate(std::shared_ptr<const MapSpec> map, int n_games,
                                 const GenConfig& cfg, const AnchorPolicy& anchor,
                                 std::ostream& out, const TransitionObserver& observer) {
  if (n_games < 1) throw Error("gen-data needs at least one game");
  cfg.search.validate();
  const int n = map->num_powers();
  DatasetSummary sum;
  double abs_q = 0.0;
  for (int g = 0; g < n_games; ++g) {
    const std::uint64_t game_seed = mix_seed(cfg.search.seed, {0x67656eULL, static_cast<std::uint64_t>(g)});
    GameState s = initial_state(map);
    const int max_year = cfg.max_year > 0 ? cfg.max_year : s.year + 2;
    while (solo_winner(s) == kNeutral && s.year <= max_year) {
      const std::uint64_t phase_seed =
          mix_seed(game_seed, {static_cast<std::uint64_t>(s.year), static_cast<std::uint64_t>(s.phase)});
      std::vector<JointAction> orders;
      if (is_move_phase(s.phase)) {
        SearchConfig sc = cfg.search;
        sc.seed = phase_seed;
        std::vector<PowerId> powers;
        for (PowerId p = 0; p < n; ++p) {
          if (s.unit_count(p) > 0) powers.push_back(p);
        }
        SearchResult res = run_pikl(s, sc, anchor, powers);
        Rng rng(mix_seed(phase_seed, {0x706963ULL}));
        for (PowerId p = 0; p < n; ++p) {
          const PowerSearch* ps = res.find(p);
          if (ps == nullptr) {
            orders.push_back({p, {}});
            continue;
          }
          const int pick = static_cast<int>(rng.categorical(ps->policy));
          for (UnitTransition& t : make_transitions(s, *ps, pick, sc.beta, cfg.emit)) {
            t.game = static_cast<std::uint64_t>(g);
            t.seed = game_seed;
            out << transition_to_json(t) << '\n';
            if (!out) throw Error("dataset write failed");
            if (observer) observer(s, t);
            abs_q += std::abs(t.q_value);
            ++sum.transitions;
          }
          orders.push_back(ps->candidates.joints[pick]);
        }
        ++sum.phases;
      } else if (is_retreat_phase(s.phase)) {
        Rng rng(mix_seed(phase_seed, {0x72657472ULL}));
        for (PowerId p = 0; p < n; ++p) orders.push_back(random_retreats(s, p, rng));
      } else {
        for (PowerId p = 0; p < n; ++p) orders.push_back(greedy_adjustments(s, p));
      }
      s = step(s, orders);
    }
    ++sum.games;
  }
  sum.mean_abs_q = sum.transitions > 0 ? abs_q / static_cast<double>(sum.transitions) : 0.0;
  return sum;
}

}  // namespace dipeq

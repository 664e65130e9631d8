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

#include "dipeq/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dipeq/adjudicator.hpp"
#include "dipeq/error.hpp"
#include "dipeq/orders.hpp"
#include "text_util.hpp"

namespace dipeq {

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::kWin: return "win";
    case Classification::kMostSc: return "most_sc";
    case Classification::kSurvived: return "survived";
    case Classification::kDefeated: return "defeated";
  }
  return "?";
}

const char* termination_name(Termination t) {
  return t == Termination::kSoloWin ? "solo_win" : "max_year_draw";
}

GameOutcome classify_outcome(const GameState& s, Termination termination) {
  const MapSpec& m = *s.map;
  const int n = m.num_powers();
  GameOutcome out;
  out.termination = termination;
  out.final_year = s.year;
  out.sc_counts = s.sc_counts();
  out.classes.assign(n, Classification::kSurvived);
  if (termination == Termination::kSoloWin) out.winner = solo_winner(s);
  if (termination == Termination::kSoloWin && out.winner == kNeutral) {
    throw Error("solo termination without a power at the win threshold");
  }
  int best = 0;
  for (PowerId p = 0; p < n; ++p) {
    if (p != out.winner) best = std::max(best, out.sc_counts[p]);
  }
  for (PowerId p = 0; p < n; ++p) {
    if (p == out.winner) {
      out.classes[p] = Classification::kWin;
    } else if (out.sc_counts[p] == 0) {
      out.classes[p] = Classification::kDefeated;
    } else if (termination == Termination::kMaxYearDraw && out.sc_counts[p] == best) {
      out.classes[p] = Classification::kMostSc;
    }
  }
  if (std::all_of(out.sc_counts.begin(), out.sc_counts.end(), [](int c) { return c == 0; })) {
    out.sos.assign(n, 1.0 / n);
  } else {
    out.sos = sos_score(out.sc_counts);
  }
  return out;
}

Script Script::parse(std::string_view doc, const MapSpec& map) {
  Script script;
  for (const auto& line : text::split_lines(doc)) {
    // <year> <phase> <Power>: <order>; <order>; ...
    if (line.tokens.size() < 3) text::syntax_error(line, 0, "expected '<year> <phase> <power>:'");
    int year = 0;
    try {
      year = std::stoi(line.tokens[0].text);
    } catch (const std::exception&) {
      text::syntax_error(line, 0, "bad year '" + line.tokens[0].text + "'");
    }
    auto phase = phase_from_name(line.tokens[1].text);
    if (!phase) text::syntax_error(line, 1, "unknown phase '" + line.tokens[1].text + "'");
    std::string power_tok = line.tokens[2].text;
    if (power_tok.empty() || power_tok.back() != ':') {
      text::syntax_error(line, 2, "expected '<power>:'");
    }
    power_tok.pop_back();
    auto power = map.find_power(power_tok);
    if (!power) text::syntax_error(line, 2, "unknown power '" + power_tok + "'");
    auto& list = script.orders_[{year, static_cast<int>(*phase), *power}];
    std::string rest = text::rest_of_line(line, 3);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t end = rest.find(';', start);
      if (end == std::string::npos) end = rest.size();
      std::string item = rest.substr(start, end - start);
      const auto first = item.find_first_not_of(" \t");
      if (first != std::string::npos) {
        item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
        list.push_back(item);
      }
      start = end + 1;
    }
  }
  return script;
}

Script Script::load(const std::string& path, const MapSpec& map) {
  return parse(text::read_file(path), map);
}

const std::vector<std::string>* Script::find(int year, Phase phase, PowerId power) const {
  auto it = orders_.find({year, static_cast<int>(phase), power});
  return it == orders_.end() ? nullptr : &it->second;
}

AgentSpec AgentSpec::from_name(const std::string& name, const MapSpec& map) {
  AgentSpec a;
  if (name == "anchor_only" || name == "anchor") {
    a.kind = AgentKind::kAnchorOnly;
  } else if (name == "pikl") {
    a.kind = AgentKind::kPikl;
  } else if (name.rfind("scripted:", 0) == 0) {
    a.kind = AgentKind::kScripted;
    a.script = std::make_shared<const Script>(Script::load(name.substr(9), map));
  } else {
    throw Error("unknown agent '" + name + "' (anchor_only, pikl, scripted:<file>)");
  }
  return a;
}

std::string AgentSpec::name() const {
  switch (kind) {
    case AgentKind::kAnchorOnly: return "anchor_only";
    case AgentKind::kPikl: return "pikl";
    case AgentKind::kScripted: return "scripted";
  }
  return "?";
}

namespace {

JointAction scripted_orders(const Script& script, const GameState& s, PowerId power) {
  JointAction joint{power, {}};
  if (const auto* list = script.find(s.year, s.phase, power)) {
    for (const std::string& text : *list) joint.orders.push_back(parse_order(text, Dialect::kShort, s));
  }
  return joint;
}

}  // namespace

JointAction agent_act(const AgentSpec& agent, const GameState& s, PowerId power,
                      const AnchorPolicy& anchor, std::uint64_t seed) {
  if (!is_move_phase(s.phase)) throw PhaseError("agent_act needs a move phase");
  switch (agent.kind) {
    case AgentKind::kAnchorOnly: {
      Rng rng(seed);
      return sample_anchor_joint(anchor, s, power, rng);
    }
    case AgentKind::kScripted: {
      // Units without a scripted order hold.
      JointAction joint = scripted_orders(*agent.script, s, power);
      for (const Unit& u : s.units) {
        if (u.owner != power) continue;
        bool has = std::any_of(joint.orders.begin(), joint.orders.end(),
                               [&](const Order& o) { return o.actor == u.loc; });
        if (!has) joint.orders.push_back(Order::hold(u.kind, u.loc));
      }
      sort_canonical(joint.orders, *s.map);
      return joint;
    }
    case AgentKind::kPikl: {
      if (s.unit_count(power) == 0) return {power, {}};
      SearchConfig cfg = agent.search;
      cfg.seed = seed;
      std::vector<PowerId> powers;
      if (!agent.search_all_powers) powers.push_back(power);
      SearchResult res = run_pikl(s, cfg, anchor, powers);
      const PowerSearch* ps = res.find(power);
      std::size_t pick = 0;
      if (agent.act == ActMode::kArgmax) {
        pick = std::max_element(ps->policy.begin(), ps->policy.end()) - ps->policy.begin();
      } else {
        Rng rng(mix_seed(seed, {0x616374ULL}));
        pick = rng.categorical(ps->policy);
      }
      return ps->candidates.joints[pick];
    }
  }
  throw Error("unknown agent kind");
}

GameOutcome play_game(std::shared_ptr<const MapSpec> map, const std::vector<AgentSpec>& agents,
                      const AnchorPolicy& anchor, const PlayConfig& play, std::uint64_t seed) {
  const int n = map->num_powers();
  if (static_cast<int>(agents.size()) != n) throw Error("play_game needs one agent per power");
  GameState s = initial_state(map);
  const int max_year = play.max_year > 0 ? play.max_year : s.year + 20;
  int move_phases = 0;
  while (true) {
    if (solo_winner(s) != kNeutral) {
      GameOutcome out = classify_outcome(s, Termination::kSoloWin);
      out.move_phases = move_phases;
      return out;
    }
    if (s.year > max_year) {
      GameOutcome out = classify_outcome(s, Termination::kMaxYearDraw);
      out.move_phases = move_phases;
      return out;
    }
    const std::uint64_t phase_seed =
        mix_seed(seed, {static_cast<std::uint64_t>(s.year), static_cast<std::uint64_t>(s.phase)});
    std::vector<JointAction> orders;
    if (is_move_phase(s.phase)) {
      for (PowerId p = 0; p < n; ++p) {
        orders.push_back(agent_act(agents[p], s, p, anchor,
                                   mix_seed(phase_seed, {static_cast<std::uint64_t>(p)})));
      }
      ++move_phases;
    } else if (is_retreat_phase(s.phase)) {
      Rng rng(mix_seed(phase_seed, {0x72657472ULL}));
      for (PowerId p = 0; p < n; ++p) {
        if (agents[p].kind == AgentKind::kScripted &&
            agents[p].script->find(s.year, s.phase, p) != nullptr) {
          orders.push_back(scripted_orders(*agents[p].script, s, p));
        } else {
          orders.push_back(random_retreats(s, p, rng));
        }
      }
    } else {
      for (PowerId p = 0; p < n; ++p) {
        if (agents[p].kind == AgentKind::kScripted &&
            agents[p].script->find(s.year, s.phase, p) != nullptr) {
          orders.push_back(scripted_orders(*agents[p].script, s, p));
        } else {
          orders.push_back(greedy_adjustments(s, p));
        }
      }
    }
    s = step(s, orders);
  }
}

Metric mean_and_se(const std::vector<double>& xs) {
  Metric m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / (xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
  }
  return m;
}

TournamentResult tournament(std::shared_ptr<const MapSpec> map, const AgentSpec& agent_a,
                            const AgentSpec& agent_b, int n_games, const AnchorPolicy& anchor,
                            const PlayConfig& play, std::uint64_t seed) {
  if (n_games < 1) throw Error("tournament needs at least one game");
  const int n = map->num_powers();
  TournamentResult res;
  res.games = n_games;
  std::vector<double> sos, win, most, surv, def;
  std::vector<std::vector<double>> by_power(n);
  for (int g = 0; g < n_games; ++g) {
    const PowerId seat = g % n;
    std::vector<AgentSpec> agents(n, agent_b);
    agents[seat] = agent_a;
    GameOutcome out = play_game(map, agents, anchor, play,
                                mix_seed(seed, {0x67616d65ULL, static_cast<std::uint64_t>(g)}));
    sos.push_back(out.sos[seat]);
    const Classification c = out.classes[seat];
    win.push_back(c == Classification::kWin);
    most.push_back(c == Classification::kMostSc);
    surv.push_back(c == Classification::kSurvived);
    def.push_back(c == Classification::kDefeated);
    for (PowerId p = 0; p < n; ++p) by_power[p].push_back(out.sos[p]);
    res.seats.push_back(seat);
    res.outcomes.push_back(std::move(out));
  }
  res.sos = mean_and_se(sos);
  res.win = mean_and_se(win);
  res.most_sc = mean_and_se(most);
  res.survived = mean_and_se(surv);
  res.defeated = mean_and_se(def);
  for (const auto& xs : by_power) res.sos_by_power.push_back(mean_and_se(xs));
  return res;
}

void write_tournament(std::ostream& out, const TournamentResult& r, const MapSpec& map, bool lines) {
  const std::pair<const char*, const Metric*> rows[] = {
      {"sos", &r.sos},           {"win", &r.win},           {"most_sc", &r.most_sc},
      {"survived", &r.survived}, {"defeated", &r.defeated},
  };
  if (lines) {
    out << "games " << r.games << '\n';
    for (const auto& [key, m] : rows) {
      out << key << ' ' << text::format_real(m->mean) << ' ' << text::format_real(m->se) << '\n';
    }
    for (PowerId p = 0; p < map.num_powers(); ++p) {
      out << "power_sos " << map.power_name(p) << ' ' << text::format_real(r.sos_by_power[p].mean)
          << ' ' << text::format_real(r.sos_by_power[p].se) << '\n';
    }
    return;
  }
  char buf[128];
  out << "games: " << r.games << "\n";
  for (const auto& [key, m] : rows) {
    std::snprintf(buf, sizeof(buf), "%-10s %6.2f%% +- %.2f%%\n", key, 100.0 * m->mean, 100.0 * m->se);
    out << buf;
  }
  out << "per-power SoS over all games:\n";
  for (PowerId p = 0; p < map.num_powers(); ++p) {
    std::snprintf(buf, sizeof(buf), "  %-10s %6.2f%% +- %.2f%%\n", map.power_name(p).c_str(),
                  100.0 * r.sos_by_power[p].mean, 100.0 * r.sos_by_power[p].se);
    out << buf;
  }
}

}  // namespace dipeq

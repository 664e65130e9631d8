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

#include "dipeq/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dipeq/adjudicator.hpp"
#include "dipeq/case_file.hpp"
#include "dipeq/config.hpp"
#include "dipeq/dataset.hpp"
#include "dipeq/equilibria.hpp"
#include "dipeq/error.hpp"
#include "dipeq/eval.hpp"
#include "dipeq/search.hpp"
#include "dipeq/verify.hpp"
#include "text_util.hpp"

namespace dipeq {

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string format = "human";

  bool lines() const { return format == "lines"; }
  RunConfig config() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) c.seed = *seed;
    c.search.seed = c.seed;
    return c;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

PowerId power_arg(const MapSpec& m, const std::string& name) {
  auto p = m.find_power(name);
  if (!p) throw Error("unknown power '" + name + "'");
  return *p;
}

int cmd_map_validate(const Globals& g, const std::string& path, std::ostream& out) {
  MapSpec m = load_map_file(path);
  if (g.lines()) {
    out << "ok 1\nprovinces " << m.num_provinces() << "\nlocations " << m.num_locations()
        << "\ncenters " << m.total_supply_centers() << "\npowers " << m.num_powers()
        << "\nstart_units " << m.start_units().size() << "\nwin_threshold " << m.win_threshold()
        << '\n';
  } else {
    out << path << ": ok, " << m.num_provinces() << " provinces, " << m.total_supply_centers()
        << " centers, " << m.num_powers() << " powers, " << m.start_units().size()
        << " starting units, win at " << m.win_threshold() << '\n';
  }
  return 0;
}

int cmd_adjudicate(const Globals& g, const std::string& path, std::ostream& out) {
  AdjudicationCase c = load_case(path);
  CaseOutcome r = run_case(c);
  const MapSpec& m = *c.state.map;
  for (std::size_t i = 0; i < r.effective.size(); ++i) {
    const std::string text = render_order(r.effective[i], Dialect::kShort, m);
    if (g.lines()) {
      out << "order " << text << '\t' << (r.succeeded[i] ? "succeeds" : "fails") << '\n';
    } else {
      out << (r.succeeded[i] ? "  ok    " : "  fail  ") << text << '\n';
    }
  }
  for (const Coercion& co : r.coercions) {
    out << (g.lines() ? "coerced " : "  coerced: ")
        << (co.power == kNeutral ? std::string("-") : m.power_name(co.power)) << ' '
        << render_order(co.submitted, Dialect::kShort, m) << " (" << co.reason << ")\n";
  }
  if (!g.lines()) out << "resulting state:\n";
  std::istringstream st(serialize_state(r.result, false));
  for (std::string line; std::getline(st, line);) out << (g.lines() ? "state " : "  ") << line << '\n';
  if (!c.expect) return 0;
  for (const auto& msg : r.mismatches) out << (g.lines() ? "mismatch " : "  mismatch: ") << msg << '\n';
  const bool pass = r.mismatches.empty();
  out << (g.lines() ? (pass ? "result PASS\n" : "result FAIL\n") : (pass ? "PASS\n" : "FAIL\n"));
  return pass ? 0 : 1;
}

int cmd_search(const Globals& g, const std::string& path, std::optional<double> beta,
               std::optional<int> iters, std::optional<int> candidates,
               const std::vector<std::string>& power_names, const std::string& trace_path,
               std::ostream& out) {
  RunConfig cfg = g.config();
  if (beta) cfg.search.beta = *beta;
  if (iters) cfg.search.iterations = *iters;
  if (candidates) cfg.search.n_candidates = *candidates;
  cfg.search.record_trace = !trace_path.empty();
  GameState s = load_state_file(path);
  const MapSpec& m = *s.map;
  std::vector<PowerId> powers;
  for (const auto& n : power_names) powers.push_back(power_arg(m, n));
  AnchorPolicy anchor = make_anchor(cfg.anchor);
  SearchResult res = run_pikl(s, cfg.search, anchor, powers);
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path, std::ios::binary);
    if (!tf) throw Error("cannot write " + trace_path);
    write_trace(tf, res, m);
  }
  if (!g.lines()) {
    out << "iterations " << res.iterations << ", utility evaluations " << res.utility_evaluations
        << '\n';
  }
  for (const PowerSearch& ps : res.powers) {
    std::vector<int> idx(ps.policy.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return ps.policy[a] > ps.policy[b]; });
    if (!g.lines()) out << m.power_name(ps.power) << ":\n";
    for (int c : idx) {
      const std::string joint = render_joint(ps.candidates.joints[c], Dialect::kShort, m);
      if (g.lines()) {
        out << "candidate\t" << m.power_name(ps.power) << '\t' << c << '\t'
            << text::format_real(ps.policy[c]) << '\t' << text::format_real(ps.average_policy[c])
            << '\t' << text::format_real(ps.mean_q[c]) << '\t'
            << text::format_real(ps.anchor_logprob[c]) << '\t' << joint << '\n';
      } else {
        out << "  " << fmt("%7.4f", ps.policy[c]) << "  Q " << fmt("%7.4f", ps.mean_q[c])
            << "  log tau " << fmt("%8.4f", ps.anchor_logprob[c]) << "  "
            << (joint.empty() ? "(no units)" : joint) << '\n';
      }
    }
  }
  return 0;
}

int cmd_gen_data(const Globals& g, const std::string& map_ref, int games, const std::string& out_path,
                 std::ostream& out) {
  RunConfig cfg = g.config();
  auto map = std::make_shared<const MapSpec>(load_map_file(resolve_map_path(map_ref)));
  GenConfig gc;
  gc.search = cfg.search;
  gc.max_year = cfg.dataset_max_year;
  gc.emit = cfg.emit;
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error("cannot write " + out_path);
  DatasetSummary sum = selfplay_generate(map, games, gc, make_anchor(cfg.anchor), f);
  f.close();
  if (!f) throw Error("write to " + out_path + " failed");
  if (g.lines()) {
    out << "games " << sum.games << "\nphases " << sum.phases << "\ntransitions " << sum.transitions
        << "\nmean_abs_q " << text::format_real(sum.mean_abs_q) << '\n';
  } else {
    out << "wrote " << sum.transitions << " records from " << sum.games << " game(s), "
        << sum.phases << " move phases, mean |Q| " << fmt("%.4f", sum.mean_abs_q) << " to "
        << out_path << '\n';
  }
  return 0;
}

int cmd_verify(const Globals& g, const std::string& what, int cases, int games, int iters,
               std::ostream& out) {
  const std::uint64_t seed = g.seed.value_or(0);
  if (what == "theorem1") {
    Theorem1Report r = sweep_theorem1(cases > 0 ? cases : 100, seed);
    const bool ok = r.max_discrepancy <= 1e-9;
    if (g.lines()) {
      out << "cases " << r.cases << "\nmax_discrepancy " << text::format_real(r.max_discrepancy)
          << "\nresult " << (ok ? "PASS" : "FAIL") << '\n';
    } else {
      out << "theorem1: " << r.cases << " tables, max discrepancy "
          << fmt("%.3g", r.max_discrepancy) << (ok ? "  PASS\n" : "  FAIL\n");
    }
    return ok ? 0 : 1;
  }
  if (what == "lowerbound") {
    LowerBoundReport r = sweep_lower_bound(cases > 0 ? cases : 10000, seed);
    const bool ok = r.violations == 0 && r.max_saturation_gap <= 1e-8;
    if (g.lines()) {
      out << "cases " << r.cases << "\ncomparisons " << r.comparisons << "\nviolations "
          << r.violations << "\nsaturation_cases " << r.saturation_cases
          << "\nmax_saturation_gap " << text::format_real(r.max_saturation_gap) << "\nresult "
          << (ok ? "PASS" : "FAIL") << '\n';
    } else {
      out << "lowerbound: " << r.cases << " tables, " << r.comparisons << " comparisons, "
          << r.violations << " violations, saturation gap " << fmt("%.3g", r.max_saturation_gap)
          << (ok ? "  PASS\n" : "  FAIL\n");
    }
    return ok ? 0 : 1;
  }
  if (what == "theorem2") {
    auto rows = sweep_theorem2(games >= 0 ? games : 20, iters > 0 ? iters : 10000, seed);
    bool ok = true;
    for (const auto& r : rows) {
      ok = ok && r.bound_ok && r.monotone_ok;
      if (g.lines()) {
        out << "row " << r.game << ' ' << (r.skewed ? "skewed" : "uniform") << ' '
            << text::format_real(r.beta) << ' ' << text::format_real(r.expl1) << ' '
            << text::format_real(r.bound1) << ' ' << text::format_real(r.expl2) << ' '
            << text::format_real(r.bound2) << ' ' << text::format_real(r.reg_rise) << ' '
            << (r.bound_ok ? "ok" : "bound_fail") << ' ' << (r.monotone_ok ? "ok" : "trend_fail")
            << '\n';
      } else {
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "%-9s %-7s beta %.2f  expl %.4f/%.4f  bound %.4f/%.4f  trend rise %.2e  %s\n",
                      r.game.c_str(), r.skewed ? "skewed" : "uniform", r.beta, r.expl1, r.expl2,
                      r.bound1 + 0.01, r.bound2 + 0.01, r.reg_rise,
                      r.bound_ok && r.monotone_ok ? "ok" : "FAIL");
        out << buf;
      }
    }
    out << (g.lines() ? "result " : "theorem2: ") << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
  throw Error("verify expects theorem1, theorem2 or lowerbound");
}

int cmd_tournament(const Globals& g, const std::string& map_ref, const std::string& a,
                   const std::string& b, int games, std::ostream& out) {
  RunConfig cfg = g.config();
  auto map = std::make_shared<const MapSpec>(load_map_file(resolve_map_path(map_ref)));
  auto spec = [&](const std::string& name) {
    AgentSpec s = AgentSpec::from_name(name, *map);
    s.search = cfg.search;
    s.act = cfg.act;
    s.search_all_powers = cfg.search_all_powers;
    return s;
  };
  TournamentResult r = tournament(map, spec(a), spec(b), games, make_anchor(cfg.anchor), cfg.play,
                                  cfg.seed);
  if (!g.lines()) out << a << " (one seat) vs " << b << " (rest) on " << map_ref << '\n';
  write_tournament(out, r, *map, g.lines());
  return 0;
}

int cmd_encode_state(const std::string& path, const std::string& power, std::ostream& out) {
  GameState s = load_state_file(path);
  out << encode_state_text(s, power_arg(*s.map, power)) << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diplomacy adjudication, anchored search and dataset tools", "dipeq"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"human", "lines"}));

  int status = 0;
  std::function<int()> run;

  auto* map_cmd = app.add_subcommand("map", "Map utilities")->require_subcommand(1);
  std::string map_path;
  auto* validate = map_cmd->add_subcommand("validate", "Check a map file");
  validate->add_option("file", map_path)->required();
  validate->callback([&] { run = [&] { return cmd_map_validate(g, map_path, out); }; });

  std::string case_path;
  auto* adj = app.add_subcommand("adjudicate", "Resolve one phase of a case file");
  adj->add_option("case-file", case_path)->required();
  adj->callback([&] { run = [&] { return cmd_adjudicate(g, case_path, out); }; });

  std::string state_path, trace_path;
  std::optional<double> beta;
  std::optional<int> iters, candidates;
  std::vector<std::string> search_powers;
  auto* search = app.add_subcommand("search", "Run anchored Hedge on a state");
  search->add_option("state-file", state_path)->required();
  search->add_option("--beta", beta);
  search->add_option("--iters", iters);
  search->add_option("--candidates", candidates);
  search->add_option("--power", search_powers, "Powers to search (default: all)");
  search->add_option("--trace", trace_path, "Write the per-iteration trace here");
  search->callback([&] {
    run = [&] {
      return cmd_search(g, state_path, beta, iters, candidates, search_powers, trace_path, out);
    };
  });

  std::string gen_map, gen_out;
  int gen_games = 1;
  auto* gen = app.add_subcommand("gen-data", "Self-play and write training records");
  gen->add_option("map", gen_map)->required();
  gen->add_option("--games", gen_games)->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out)->required();
  gen->callback([&] { run = [&] { return cmd_gen_data(g, gen_map, gen_games, gen_out, out); }; });

  std::string what;
  int v_cases = 0, v_games = -1, v_iters = 0;
  auto* verify = app.add_subcommand("verify", "Randomized property sweeps");
  verify->add_option("what", what)->required()->check(
      CLI::IsMember({"theorem1", "theorem2", "lowerbound"}));
  verify->add_option("--cases", v_cases);
  verify->add_option("--games", v_games);
  verify->add_option("--iters", v_iters);
  verify->callback([&] { run = [&] { return cmd_verify(g, what, v_cases, v_games, v_iters, out); }; });

  std::string t_map = "ring7", agent_a = "pikl", agent_b = "anchor_only";
  int t_games = 10;
  auto* tour = app.add_subcommand("tournament", "One seat of agent-a against agent-b");
  tour->add_option("--map", t_map);
  tour->add_option("--agent-a", agent_a);
  tour->add_option("--agent-b", agent_b);
  tour->add_option("--games", t_games)->check(CLI::PositiveNumber);
  tour->callback([&] {
    run = [&] { return cmd_tournament(g, t_map, agent_a, agent_b, t_games, out); };
  });

  std::string enc_path, enc_power;
  auto* enc = app.add_subcommand("encode-state", "Print the text encoding of a state");
  enc->add_option("state-file", enc_path)->required();
  enc->add_option("--power", enc_power)->required();
  enc->callback([&] { run = [&] { return cmd_encode_state(enc_path, enc_power, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    status = run ? run() : 2;
  } catch (const SyntaxError& e) {
    err << "dipeq: syntax error at " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "dipeq: " << e.what() << '\n';
    return 1;
  }
  return status;
}

}  // namespace dipeq

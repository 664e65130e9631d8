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

#include "dipeq/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "dipeq/error.hpp"
#include "dipeq/orders.hpp"
#include "text_util.hpp"

namespace dipeq {

void SearchConfig::validate() const {
  if (iterations < 1) throw Error("search iterations must be >= 1");
  if (n_candidates < 1) throw Error("search candidates must be >= 1");
  if (max_per_unit < 1) throw Error("max candidates per unit must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error("beta must be finite and >= 0");
  if (!(nash_explore >= 0.0 && nash_explore <= 1.0)) throw Error("nash_explore must be in [0, 1]");
  if (rollouts < 1) throw Error("rollouts must be >= 1");
  if (horizon < 0) throw Error("horizon must be >= 0");
}

std::vector<double> policy_from_q(std::span<const double> q, std::span<const double> logtau,
                                  double beta) {
  const std::size_t n = q.size();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = beta * logtau[i] + q[i];
  if (n == 0) return z;
  const double hi = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& x : z) {
    x = std::exp(x - hi);
    total += x;
  }
  for (double& x : z) x /= total;
  return z;
}

namespace {

// Candidates plus bookkeeping the search needs: per-unit indices of each
// joint and log tau of every top order under the full-list anchor.
struct CandidateSet {
  Candidates c;
  std::vector<std::vector<double>> top_logprob;
  std::vector<std::vector<double>> top_prob;
  std::vector<std::vector<int>> choice;  // joint -> per-unit index into top list
};

CandidateSet build_candidates(const GameState& s, PowerId power, const AnchorPolicy& anchor,
                              const SearchConfig& cfg, Rng& rng) {
  CandidateSet out;
  auto units = legal_orders(s, power);
  for (const auto& uo : units) {
    auto probs = anchor.unit_distribution(s, power, uo.unit, uo.orders);
    std::vector<int> idx(uo.orders.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return probs[a] > probs[b]; });
    idx.resize(std::min<std::size_t>(idx.size(), cfg.max_per_unit));
    std::sort(idx.begin(), idx.end());
    std::vector<Order> top;
    std::vector<double> lp, p;
    for (int i : idx) {
      top.push_back(uo.orders[i]);
      lp.push_back(std::log(probs[i]));
      p.push_back(probs[i]);
    }
    out.c.units.push_back(uo.unit);
    out.c.top_orders.push_back(std::move(top));
    out.top_logprob.push_back(std::move(lp));
    out.top_prob.push_back(std::move(p));
  }
  const std::size_t d_count = out.c.units.size();
  auto add = [&](const std::vector<int>& ch) {
    JointAction j{power, {}};
    for (std::size_t d = 0; d < d_count; ++d) j.orders.push_back(out.c.top_orders[d][ch[d]]);
    out.c.joints.push_back(std::move(j));
    out.choice.push_back(ch);
  };

  double product = 1.0;
  for (const auto& top : out.c.top_orders) product *= static_cast<double>(top.size());
  if (product <= cfg.n_candidates) {
    std::vector<int> ch(d_count, 0);
    while (true) {
      add(ch);
      std::size_t d = d_count;
      while (d > 0) {
        --d;
        if (++ch[d] < static_cast<int>(out.c.top_orders[d].size())) break;
        ch[d] = 0;
        if (d == 0) return out;
      }
      if (d_count == 0) return out;
    }
  }

  std::set<std::vector<int>> seen;
  std::vector<int> argmax(d_count);
  for (std::size_t d = 0; d < d_count; ++d) {
    const auto& p = out.top_prob[d];
    argmax[d] = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  }
  seen.insert(argmax);
  add(argmax);
  const int max_draws = 20 * cfg.n_candidates;
  for (int draw = 0; draw < max_draws && static_cast<int>(out.choice.size()) < cfg.n_candidates;
       ++draw) {
    std::vector<int> ch(d_count);
    for (std::size_t d = 0; d < d_count; ++d) {
      const auto& p = out.top_prob[d];
      ch[d] = rng.bernoulli(cfg.nash_explore) ? static_cast<int>(rng.below(p.size()))
                                              : static_cast<int>(rng.categorical(p));
    }
    if (seen.insert(ch).second) add(ch);
  }
  return out;
}

using ProfileKey = std::vector<std::int64_t>;

void append_joint_key(ProfileKey& key, const JointAction& j) {
  key.push_back(-1 - static_cast<std::int64_t>(j.orders.size()));
  for (const Order& o : j.orders) {
    key.push_back((static_cast<std::int64_t>(o.type) << 40) ^
                  (static_cast<std::int64_t>(o.actor) << 20) ^ (o.dest + 1));
    key.push_back((static_cast<std::int64_t>(o.target_kind) << 20) ^ (o.target + 1));
  }
}

std::uint64_t key_seed(std::uint64_t seed, std::uint64_t salt, const ProfileKey& key) {
  std::uint64_t h = mix_seed(seed, {salt});
  for (std::int64_t k : key) h = mix_seed(h, {static_cast<std::uint64_t>(k)});
  return h;
}

}  // namespace

Candidates generate_candidates(const GameState& s, PowerId power, const AnchorPolicy& anchor,
                               const SearchConfig& cfg, Rng& rng) {
  if (!is_move_phase(s.phase)) throw PhaseError("generate_candidates needs a move phase");
  return build_candidates(s, power, anchor, cfg, rng).c;
}

const PowerSearch* SearchResult::find(PowerId power) const {
  for (const auto& p : powers) {
    if (p.power == power) return &p;
  }
  return nullptr;
}

SearchResult run_pikl(const GameState& s, const SearchConfig& cfg, const AnchorPolicy& anchor,
                      std::vector<PowerId> powers) {
  cfg.validate();
  if (!is_move_phase(s.phase)) throw PhaseError("run_pikl needs a move phase");
  const int n_powers = s.map->num_powers();
  if (powers.empty()) {
    powers.resize(n_powers);
    std::iota(powers.begin(), powers.end(), 0);
  }
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
  std::vector<int> slot(n_powers, -1);
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (powers[k] < 0 || powers[k] >= n_powers) throw Error("search power out of range");
    slot[powers[k]] = static_cast<int>(k);
  }

  SearchResult res;
  res.iterations = cfg.iterations;
  std::vector<CandidateSet> sets;
  for (PowerId p : powers) {
    Rng rng(mix_seed(cfg.seed, {0x63616e64ULL, static_cast<std::uint64_t>(p)}));
    sets.push_back(build_candidates(s, p, anchor, cfg, rng));
    PowerSearch ps;
    ps.power = p;
    ps.candidates = sets.back().c;
    const std::size_t n = ps.candidates.joints.size();
    ps.anchor_logprob.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t d = 0; d < sets.back().choice[c].size(); ++d) {
        ps.anchor_logprob[c] += sets.back().top_logprob[d][sets.back().choice[c][d]];
      }
    }
    ps.policy.assign(n, 1.0 / static_cast<double>(n));
    ps.average_policy.assign(n, 0.0);
    ps.mean_q.assign(n, 0.0);
    res.powers.push_back(std::move(ps));
  }

  // Deterministic utilities (horizon 0) are cached for the whole search;
  // noisy ones only within an iteration.
  const bool deterministic = cfg.horizon == 0;
  std::map<ProfileKey, std::vector<double>> cache;
  std::vector<std::vector<double>> sum_q(powers.size());
  for (std::size_t k = 0; k < powers.size(); ++k) sum_q[k].assign(res.powers[k].mean_q.size(), 0.0);

  for (int t = 1; t <= cfg.iterations; ++t) {
    if (!deterministic) cache.clear();
    Rng rng(mix_seed(cfg.seed, {0x69746572ULL, static_cast<std::uint64_t>(t)}));
    // One sampled profile from pi^{t-1}, epsilon-mixed with uniform.
    std::vector<int> sampled(powers.size());
    for (std::size_t k = 0; k < powers.size(); ++k) {
      const auto& pol = res.powers[k].policy;
      sampled[k] = rng.bernoulli(cfg.nash_explore) ? static_cast<int>(rng.below(pol.size()))
                                                   : static_cast<int>(rng.categorical(pol));
    }
    std::vector<JointAction> others(n_powers);
    for (PowerId p = 0; p < n_powers; ++p) {
      if (slot[p] < 0) others[p] = sample_anchor_joint(anchor, s, p, rng);
    }

    for (std::size_t k = 0; k < powers.size(); ++k) {
      const std::size_t n = res.powers[k].mean_q.size();
      for (std::size_t c = 0; c < n; ++c) {
        std::vector<JointAction> joints;
        ProfileKey key;
        for (PowerId p = 0; p < n_powers; ++p) {
          if (slot[p] < 0) {
            joints.push_back(others[p]);
            append_joint_key(key, others[p]);
            continue;
          }
          int idx = slot[p] == static_cast<int>(k) ? static_cast<int>(c) : sampled[slot[p]];
          joints.push_back(res.powers[slot[p]].candidates.joints[idx]);
          key.push_back(idx);
        }
        auto it = cache.find(key);
        if (it == cache.end()) {
          std::uint64_t seed = key_seed(cfg.seed, deterministic ? 0 : static_cast<std::uint64_t>(t), key);
          UtilityEstimate u = estimate_utility(s, joints, anchor, cfg.rollouts, cfg.horizon, seed);
          ++res.utility_evaluations;
          it = cache.emplace(std::move(key), std::move(u.values)).first;
        }
        sum_q[k][c] += it->second[powers[k]];
      }
    }
    for (std::size_t k = 0; k < powers.size(); ++k) {
      PowerSearch& ps = res.powers[k];
      for (std::size_t c = 0; c < ps.mean_q.size(); ++c) ps.mean_q[c] = sum_q[k][c] / t;
      ps.policy = policy_from_q(ps.mean_q, ps.anchor_logprob, cfg.beta);
      for (std::size_t c = 0; c < ps.policy.size(); ++c) ps.average_policy[c] += ps.policy[c];
      if (cfg.record_trace) {
        for (std::size_t c = 0; c < ps.policy.size(); ++c) {
          res.trace.push_back({t, ps.power, static_cast<int>(c), ps.mean_q[c], ps.policy[c]});
        }
      }
    }
  }
  for (PowerSearch& ps : res.powers) {
    for (double& x : ps.average_policy) x /= cfg.iterations;
    ps.joint_q_with_anchor.resize(ps.mean_q.size());
    for (std::size_t c = 0; c < ps.mean_q.size(); ++c) {
      ps.joint_q_with_anchor[c] = ps.mean_q[c] + cfg.beta * ps.anchor_logprob[c];
    }
  }
  return res;
}

void write_trace(std::ostream& out, const SearchResult& res, const MapSpec& map) {
  for (const TraceRecord& r : res.trace) {
    out << r.iteration << '\t' << map.power_name(r.power) << '\t' << r.candidate << '\t'
        << text::format_real(r.mean_q) << '\t' << text::format_real(r.prob) << '\n';
  }
}

}  // namespace dipeq

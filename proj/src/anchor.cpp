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

#include "dipeq/anchor.hpp"

#include <algorithm>
#include <cmath>

#include "dipeq/adjudicator.hpp"
#include "dipeq/error.hpp"
#include "dipeq/orders.hpp"
#include "text_util.hpp"

namespace dipeq {

std::vector<double> sos_score(const std::vector<int>& counts) {
  double total = 0.0;
  for (int c : counts) {
    if (c < 0) throw Error("negative center count");
    total += static_cast<double>(c) * c;
  }
  if (total == 0.0) throw Error("sos_score needs at least one positive count");
  std::vector<double> out;
  out.reserve(counts.size());
  for (int c : counts) out.push_back(static_cast<double>(c) * c / total);
  return out;
}

std::vector<int> provisional_counts(const GameState& s) {
  const MapSpec& m = *s.map;
  std::vector<PowerId> owner = s.sc_owner;
  for (const Unit& u : s.units) {
    int p = m.province_of(u.loc);
    if (m.is_supply_center(p)) owner[p] = u.owner;
  }
  std::vector<int> counts(m.num_powers(), 0);
  for (int p : m.supply_centers()) {
    if (owner[p] != kNeutral) ++counts[owner[p]];
  }
  return counts;
}

namespace {

// Equal shares when nobody holds a center (only on odd test boards).
std::vector<double> sos_or_equal(const std::vector<int>& counts) {
  if (std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; })) {
    return std::vector<double>(counts.size(), 1.0 / static_cast<double>(counts.size()));
  }
  return sos_score(counts);
}

}  // namespace

// ---------------------------------------------------------------------------
// AnchorTable

std::string AnchorTable::key(std::uint64_t h, const std::string& power,
                             const std::string& unit) {
  return hash_hex(h) + "\t" + power + "\t" + unit;
}

void AnchorTable::add(std::uint64_t h, const std::string& power, const std::string& unit,
                      const std::string& order, double prob) {
  entries_[key(h, power, unit)][order] = prob;
}

const std::unordered_map<std::string, double>* AnchorTable::find(
    std::uint64_t h, const std::string& power, const std::string& unit) const {
  auto it = entries_.find(key(h, power, unit));
  return it == entries_.end() ? nullptr : &it->second;
}

AnchorTable AnchorTable::parse(std::string_view doc) {
  AnchorTable t;
  int number = 0;
  std::size_t start = 0;
  while (start < doc.size()) {
    std::size_t end = doc.find('\n', start);
    if (end == std::string_view::npos) end = doc.size();
    std::string_view line = doc.substr(start, end - start);
    start = end + 1;
    ++number;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t f = 0;
    while (true) {
      std::size_t tab = line.find('\t', f);
      fields.emplace_back(line.substr(f, tab == std::string_view::npos ? line.npos : tab - f));
      if (tab == std::string_view::npos) break;
      f = tab + 1;
    }
    if (fields.size() != 5) {
      throw SyntaxError("expected 5 tab-separated fields", number, 1);
    }
    std::uint64_t h = 0;
    double prob = 0.0;
    try {
      std::size_t used = 0;
      h = std::stoull(fields[0], &used, 16);
      if (used != fields[0].size() || fields[0].size() != 16) throw std::invalid_argument("hash");
      prob = std::stod(fields[4], &used);
      if (used != fields[4].size()) throw std::invalid_argument("prob");
    } catch (const std::exception&) {
      throw SyntaxError("bad hash or probability", number, 1);
    }
    if (!(prob >= 0.0 && prob <= 1.0)) throw SyntaxError("probability outside [0, 1]", number, 1);
    t.add(h, fields[1], fields[2], fields[3], prob);
  }
  return t;
}

AnchorTable AnchorTable::load(const std::string& path) { return parse(text::read_file(path)); }

// ---------------------------------------------------------------------------
// AnchorPolicy

void apply_floor(std::vector<double>& p, double floor) {
  const std::size_t n = p.size();
  if (n == 0) return;
  const double target = std::min(floor, 1.0 / static_cast<double>(n));
  const double lo = *std::min_element(p.begin(), p.end());
  if (lo >= target) return;
  // (1 - lambda) * lo + lambda / n = target
  const double u = 1.0 / static_cast<double>(n);
  const double lambda = (u - lo) > 0 ? (target - lo) / (u - lo) : 1.0;
  for (double& x : p) x = (1.0 - lambda) * x + lambda * u;
}

AnchorPolicy AnchorPolicy::uniform(double floor) {
  AnchorPolicy a;
  a.kind_ = AnchorKind::kUniform;
  a.floor_ = floor;
  return a;
}

AnchorPolicy AnchorPolicy::heuristic(HeuristicWeights weights, double floor) {
  AnchorPolicy a;
  a.kind_ = AnchorKind::kHeuristic;
  a.weights_ = weights;
  a.floor_ = floor;
  return a;
}

AnchorPolicy AnchorPolicy::table(std::shared_ptr<const AnchorTable> table, double floor) {
  AnchorPolicy a;
  a.kind_ = AnchorKind::kTable;
  a.table_ = std::move(table);
  a.floor_ = floor;
  return a;
}

std::vector<double> AnchorPolicy::heuristic_scores(const GameState& s, PowerId power,
                                                   const Unit& unit,
                                                   const std::vector<Order>& cands) const {
  std::vector<double> score(cands.size(), 0.0);
  if (kind_ != AnchorKind::kHeuristic) return score;
  const MapSpec& m = *s.map;
  auto nearest = [&](Loc loc) {
    int best = MapSpec::kUnreachable;
    for (int sc : m.supply_centers()) {
      if (s.sc_owner[sc] == power) continue;
      best = std::min(best, m.distance(unit.kind, loc, sc));
    }
    return best;
  };
  const int here = nearest(unit.loc);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const Order& o = cands[i];
    if (o.type == OrderType::kMove) {
      int p = m.province_of(o.dest);
      if (m.is_supply_center(p) && s.sc_owner[p] != power) {
        score[i] = weights_.onto_center;
      } else if (nearest(o.dest) < here) {
        score[i] = weights_.toward_center;
      }
    } else if (o.type == OrderType::kSupportMove) {
      int j = s.unit_at(o.target);
      if (j >= 0 && s.units[j].owner == power) score[i] = weights_.support_own;
    }
  }
  return score;
}

std::vector<double> AnchorPolicy::unit_distribution(const GameState& s, PowerId power,
                                                    const Unit& unit,
                                                    const std::vector<Order>& cands) const {
  const std::size_t n = cands.size();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  if (kind_ == AnchorKind::kHeuristic) {
    std::vector<double> score = heuristic_scores(s, power, unit, cands);
    double hi = *std::max_element(score.begin(), score.end());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = std::exp((score[i] - hi) / weights_.temperature);
      total += p[i];
    }
    for (double& x : p) x /= total;
  } else if (kind_ == AnchorKind::kTable && table_) {
    const MapSpec& m = *s.map;
    std::string unit_text = std::string(1, unit_letter(unit.kind)) + " " + m.location(unit.loc).id;
    const auto* entry = table_->find(state_hash(s), m.power_name(power), unit_text);
    if (entry) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        auto it = entry->find(render_order(cands[i], Dialect::kShort, m));
        p[i] = it == entry->end() ? 0.0 : it->second;
        total += p[i];
      }
      if (total > 0.0) {
        for (double& x : p) x /= total;
      } else {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
      }
    }
  }
  apply_floor(p, floor_);
  return p;
}

double anchor_joint_logprob(const AnchorPolicy& anchor, const GameState& s, PowerId power,
                            const JointAction& joint) {
  const MapSpec& m = *s.map;
  auto units = legal_orders(s, power);
  if (joint.orders.size() != units.size()) {
    throw IllegalActionError("joint has " + std::to_string(joint.orders.size()) +
                             " orders for " + std::to_string(units.size()) + " units");
  }
  double total = 0.0;
  for (std::size_t d = 0; d < units.size(); ++d) {
    const Order& o = joint.orders[d];
    const auto& cands = units[d].orders;
    auto it = std::find(cands.begin(), cands.end(), o);
    if (it == cands.end()) {
      throw IllegalActionError("illegal order " + render_order(o, Dialect::kShort, m));
    }
    auto probs = anchor.unit_distribution(s, power, units[d].unit, cands);
    total += std::log(probs[it - cands.begin()]);
  }
  return total;
}

JointAction sample_anchor_joint(const AnchorPolicy& anchor, const GameState& s, PowerId power,
                                Rng& rng) {
  JointAction joint{power, {}};
  for (const auto& uo : legal_orders(s, power)) {
    auto probs = anchor.unit_distribution(s, power, uo.unit, uo.orders);
    joint.orders.push_back(uo.orders[rng.categorical(probs)]);
  }
  return joint;
}

JointAction anchor_argmax_joint(const AnchorPolicy& anchor, const GameState& s, PowerId power) {
  JointAction joint{power, {}};
  for (const auto& uo : legal_orders(s, power)) {
    auto probs = anchor.unit_distribution(s, power, uo.unit, uo.orders);
    joint.orders.push_back(uo.orders[std::max_element(probs.begin(), probs.end()) - probs.begin()]);
  }
  return joint;
}

JointAction random_retreats(const GameState& s, PowerId power, Rng& rng) {
  JointAction joint{power, {}};
  for (int i = 0; i < static_cast<int>(s.dislodged.size()); ++i) {
    if (s.dislodged[i].unit.owner != power) continue;
    auto options = legal_retreats(s, i);
    joint.orders.push_back(options[rng.below(options.size())]);
  }
  return joint;
}

JointAction greedy_adjustments(const GameState& s, PowerId power) {
  const MapSpec& m = *s.map;
  JointAction joint{power, {}};
  int delta = adjustment_delta(s, power);
  if (delta <= 0) return joint;  // disbands follow the civil-disorder rule
  std::vector<char> used(m.num_provinces(), 0);
  for (const Order& o : legal_adjustments(s, power)) {
    if (delta == 0 || o.type != OrderType::kBuild) continue;
    int p = m.province_of(o.actor);
    if (used[p]) continue;
    used[p] = 1;
    joint.orders.push_back(o);
    --delta;
  }
  return joint;
}

UtilityEstimate estimate_utility(const GameState& state, const std::vector<JointAction>& joints,
                                 const AnchorPolicy& anchor, int rollouts, int horizon,
                                 std::uint64_t seed) {
  if (!is_move_phase(state.phase)) throw PhaseError("estimate_utility needs a move phase");
  const int n_powers = state.map->num_powers();
  UtilityEstimate est;
  est.values.assign(n_powers, 0.0);
  const Resolution first = adjudicate_moves(state, joints);
  if (horizon == 0) {
    // Deterministic: no randomness after the joints.
    est.values = sos_or_equal(provisional_counts(first.new_state));
    est.rollouts_used = 1;
    return est;
  }
  for (int r = 0; r < rollouts; ++r) {
    Rng rng(mix_seed(seed, {static_cast<std::uint64_t>(r)}));
    GameState s = first.new_state;
    int moves_left = horizon;
    PowerId winner = kNeutral;
    while (true) {
      if (is_retreat_phase(s.phase)) {
        std::vector<JointAction> orders;
        for (PowerId p = 0; p < n_powers; ++p) {
          if (std::any_of(s.dislodged.begin(), s.dislodged.end(),
                          [&](const DislodgedUnit& d) { return d.unit.owner == p; })) {
            orders.push_back(random_retreats(s, p, rng));
          }
        }
        s = adjudicate_retreats(s, orders);
        if (s.phase == Phase::kWinterAdjust && (winner = solo_winner(s)) != kNeutral) break;
        continue;
      }
      if (s.phase == Phase::kWinterAdjust) {
        std::vector<JointAction> orders;
        for (PowerId p = 0; p < n_powers; ++p) orders.push_back(greedy_adjustments(s, p));
        s = adjudicate_builds(s, orders);
        continue;
      }
      if (moves_left == 0) break;
      std::vector<JointAction> orders;
      for (PowerId p = 0; p < n_powers; ++p) orders.push_back(sample_anchor_joint(anchor, s, p, rng));
      s = adjudicate_moves(s, orders).new_state;
      --moves_left;
    }
    std::vector<double> v(n_powers, 0.0);
    if (winner != kNeutral) {
      v[winner] = 1.0;
      est.horizon_reached = false;
    } else {
      v = sos_or_equal(provisional_counts(s));
    }
    for (PowerId p = 0; p < n_powers; ++p) est.values[p] += v[p];
  }
  for (double& x : est.values) x /= rollouts;
  est.rollouts_used = rollouts;
  return est;
}

}  // namespace dipeq

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

#include "dipeq/factorizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dipeq/error.hpp"

namespace dipeq {

JointQTable::JointQTable(std::vector<int> alphabets, double beta)
    : alphabets_(std::move(alphabets)), beta_(beta) {
  if (alphabets_.empty()) throw Error("joint Q table needs at least one unit");
  std::size_t n = 1;
  for (int a : alphabets_) {
    if (a < 1) throw Error("unit alphabet must be non-empty");
    n *= static_cast<std::size_t>(a);
  }
  q_.assign(n, 0.0);
  logtau_.assign(n, 0.0);
  set_.assign(n, 0);
}

std::size_t JointQTable::index(std::span<const int> action) const {
  if (action.size() != alphabets_.size()) throw Error("joint action has the wrong length");
  std::size_t idx = 0;
  for (std::size_t d = 0; d < alphabets_.size(); ++d) {
    if (action[d] < 0 || action[d] >= alphabets_[d]) {
      throw Error("unit " + std::to_string(d + 1) + " action out of range");
    }
    idx = idx * alphabets_[d] + action[d];
  }
  return idx;
}

std::vector<int> JointQTable::action_at(std::size_t index) const {
  std::vector<int> a(alphabets_.size());
  for (std::size_t d = alphabets_.size(); d-- > 0;) {
    a[d] = static_cast<int>(index % alphabets_[d]);
    index /= alphabets_[d];
  }
  return a;
}

void JointQTable::set(std::span<const int> action, double q, double anchor_logprob) {
  const std::size_t i = index(action);
  q_[i] = q;
  logtau_[i] = anchor_logprob;
  set_[i] = 1;
}

double JointQTable::value(std::span<const int> action) const {
  const std::size_t i = index(action);
  return q_[i] + beta_ * logtau_[i];
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

UnitQ exact_unit_q(const JointQTable& table, int d, std::span<const int> prefix) {
  const int D = table.num_units();
  if (d < 1 || d > D) throw Error("unit index out of range");
  if (static_cast<int>(prefix.size()) != d - 1) throw Error("prefix length must be d - 1");
  const auto& alpha = table.alphabets();
  UnitQ out;
  out.d = d;
  out.prefix.assign(prefix.begin(), prefix.end());
  out.mode = UnitQMode::kExact;
  std::vector<int> action(D, 0);
  std::copy(prefix.begin(), prefix.end(), action.begin());
  std::vector<double> terms;
  for (int a = 0; a < alpha[d - 1]; ++a) {
    action[d - 1] = a;
    terms.clear();
    // Odometer over the suffix d+1..D.
    std::fill(action.begin() + d, action.end(), 0);
    while (true) {
      if (!table.has(action)) throw Error("joint Q table is incomplete for the requested prefix");
      terms.push_back(table.value(action));
      int k = D - 1;
      while (k >= d) {
        if (++action[k] < alpha[k]) break;
        action[k] = 0;
        --k;
      }
      if (k < d) break;
    }
    out.values.push_back(log_sum_exp(terms));
  }
  return out;
}

std::vector<double> lb_unit_q(double q, double anchor_logprob, double beta, int units) {
  return std::vector<double>(units, q + beta * anchor_logprob);
}

std::vector<double> lb_unit_q(const JointQTable& table, std::span<const int> action) {
  return lb_unit_q(table.q(action), table.anchor_logprob(action), table.beta(), table.num_units());
}

std::vector<double> factor_policy(std::span<const double> unit_q) {
  std::vector<double> p(unit_q.begin(), unit_q.end());
  if (p.empty()) return p;
  const double hi = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& x : p) {
    x = std::exp(x - hi);
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> joint_policy(const JointQTable& table) {
  std::vector<double> z(table.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    auto a = table.action_at(i);
    if (!table.has(a)) throw Error("joint Q table is incomplete");
    z[i] = table.value(a);
  }
  return factor_policy(z);
}

std::vector<double> factored_joint_policy(const JointQTable& table) {
  const int D = table.num_units();
  const auto& alpha = table.alphabets();
  // suffix[d] = number of joint actions sharing one prefix of length d.
  std::vector<std::size_t> suffix(D + 1, 1);
  for (int d = D - 1; d >= 0; --d) suffix[d] = suffix[d + 1] * alpha[d];
  // Conditionals memoized per prefix; unit 1 is the most significant digit.
  std::vector<std::vector<std::vector<double>>> memo(D);
  for (int d = 0; d < D; ++d) memo[d].resize(table.size() / suffix[d]);
  std::vector<double> out(table.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto a = table.action_at(i);
    double p = 1.0;
    for (int d = 1; d <= D; ++d) {
      auto& slot = memo[d - 1][i / suffix[d - 1]];
      if (slot.empty()) {
        UnitQ u = exact_unit_q(table, d, std::span<const int>(a.data(), d - 1));
        slot = factor_policy(u.values);
      }
      p *= slot[a[d - 1]];
    }
    out[i] = p;
  }
  return out;
}

double verify_theorem1(const JointQTable& table) {
  const auto joint = joint_policy(table);
  const auto factored = factored_joint_policy(table);
  double worst = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    worst = std::max(worst, std::abs(joint[i] - factored[i]));
  }
  return worst;
}

}  // namespace dipeq

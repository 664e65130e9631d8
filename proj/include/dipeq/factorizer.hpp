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

// Per-unit decomposition of joint Q-values.

#ifndef DIPEQ_FACTORIZER_HPP
#define DIPEQ_FACTORIZER_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace dipeq {

// Dense table over the product of per-unit alphabets. Actions are index
// tuples (a^1..a^D); entries may be left unset for sparse use, in which
// case the exact operations refuse the affected prefixes.
class JointQTable {
 public:
  JointQTable(std::vector<int> alphabets, double beta);

  int num_units() const { return static_cast<int>(alphabets_.size()); }
  const std::vector<int>& alphabets() const { return alphabets_; }
  double beta() const { return beta_; }
  std::size_t size() const { return q_.size(); }

  void set(std::span<const int> action, double q, double anchor_logprob);
  bool has(std::span<const int> action) const { return set_[index(action)]; }
  double q(std::span<const int> action) const { return q_[index(action)]; }
  double anchor_logprob(std::span<const int> action) const { return logtau_[index(action)]; }
  // q + beta * log tau.
  double value(std::span<const int> action) const;

  std::size_t index(std::span<const int> action) const;
  std::vector<int> action_at(std::size_t index) const;

 private:
  std::vector<int> alphabets_;
  double beta_;
  std::vector<double> q_;
  std::vector<double> logtau_;
  std::vector<char> set_;
};

enum class UnitQMode { kExact, kLowerBound };

struct UnitQ {
  int d = 1;                  // 1-based unit index
  std::vector<int> prefix;    // a^1..a^{d-1}
  std::vector<double> values; // one per action of unit d
  UnitQMode mode = UnitQMode::kExact;
};

double log_sum_exp(std::span<const double> xs);

// Q^d(prefix, a) = log sum over completions of exp(q + beta log tau).
// Throws Error when a completion is missing or d is out of range.
UnitQ exact_unit_q(const JointQTable& table, int d, std::span<const int> prefix);

// The single-sample bound: q + beta log tau of `action`, repeated for
// every d.
std::vector<double> lb_unit_q(const JointQTable& table, std::span<const int> action);
std::vector<double> lb_unit_q(double q, double anchor_logprob, double beta, int units);

// Softmax over one unit's values.
std::vector<double> factor_policy(std::span<const double> unit_q);
inline std::vector<double> factor_policy(const UnitQ& u) { return factor_policy(u.values); }

// pi* over the whole table, indexed like JointQTable::index.
std::vector<double> joint_policy(const JointQTable& table);

// Product of per-unit conditionals along every joint action.
std::vector<double> factored_joint_policy(const JointQTable& table);

// max |factored - joint| over all joint actions.
double verify_theorem1(const JointQTable& table);

}  // namespace dipeq

#endif  // DIPEQ_FACTORIZER_HPP

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

// Two-player zero-sum games over factored action tuples, and anchored
// Hedge dynamics run through the per-unit factorization.

#ifndef DIPEQ_EQUILIBRIA_HPP
#define DIPEQ_EQUILIBRIA_HPP

#include <cstdint>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "dipeq/rng.hpp"

namespace dipeq {

struct MatrixGame {
  std::vector<int> slots1;      // sub-action alphabets of player 1
  std::vector<int> slots2;
  std::vector<double> payoff;   // row-major n1 x n2, player 1's payoff
  std::vector<double> tau1;     // anchors over joint tuples
  std::vector<double> tau2;

  int n1() const;
  int n2() const;
  double at(int a1, int a2) const { return payoff[static_cast<std::size_t>(a1) * n2() + a2]; }
  // Throws Error on shape mismatch or a non-positive anchor entry.
  void validate() const;

  static MatrixGame rock_paper_scissors();
  static MatrixGame matching_pennies();
  // Joint alphabets of 4, 6 or 9 per player split into slots, payoffs
  // uniform on [-1, 1]. Skewed anchors are Dirichlet(1) draws mixed 9:1
  // with uniform; otherwise uniform.
  static MatrixGame random_factored(Rng& rng, bool skewed_anchor);
};

// max over tuples of log(1/tau). Throws Error on a non-positive entry.
double delta_bound(std::span<const double> anchor);

// Pure best-response gain for each player against the other's policy.
std::pair<double, double> exploitability(const MatrixGame& game, std::span<const double> pi1,
                                         std::span<const double> pi2);

// Same gap for the KL-regularized utilities u_i - beta_i KL(pi_i || tau_i).
std::pair<double, double> regularized_exploitability(const MatrixGame& game,
                                                     std::span<const double> pi1,
                                                     std::span<const double> pi2, double beta1,
                                                     double beta2);

enum class UpdateMode { kExactExpectation, kSampled };

struct LabConfig {
  double beta1 = 0.1;
  double beta2 = 0.1;
  int iterations = 10000;
  std::uint64_t seed = 0;
  UpdateMode update = UpdateMode::kExactExpectation;
  // Exponent divisor lambda in pi ~ exp((Qbar + beta log tau) / lambda).
  // Non-positive means lambda = beta (0.01 when beta is 0).
  double temperature = 0.0;
};

struct LabTracePoint {
  int iteration = 0;
  double expl1 = 0.0;
  double expl2 = 0.0;
  double reg1 = 0.0;
  double reg2 = 0.0;
};

struct LabResult {
  std::vector<double> average1;
  std::vector<double> average2;
  std::vector<LabTracePoint> trace;
  double max_factorization_error = 0.0;  // worst per-iteration factored vs joint gap
};

double lab_temperature(const LabConfig& config, double beta);

LabResult run_factored_pikl(const MatrixGame& game, const LabConfig& config);

// "iteration expl1 expl2" lines.
void write_lab_trace(std::ostream& out, const LabResult& result);

// True if the `window`-point moving average of xs[burn_in..] never rises by
// more than `slack`. `worst` receives the largest rise seen.
bool moving_average_non_increasing(std::span<const double> xs, std::size_t burn_in,
                                   std::size_t window, double slack, double* worst);

}  // namespace dipeq

#endif  // DIPEQ_EQUILIBRIA_HPP

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

#include "dipeq/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dipeq/error.hpp"
#include "dipeq/factorizer.hpp"
#include "text_util.hpp"

namespace dipeq {

namespace {

int product(const std::vector<int>& slots) {
  int n = 1;
  for (int s : slots) n *= s;
  return n;
}

std::vector<double> uniform(int n) { return std::vector<double>(n, 1.0 / n); }

std::vector<double> skewed(Rng& rng, int n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (double& x : p) x = 0.9 * x / total + 0.1 / n;
  return p;
}

std::vector<int> split_slots(Rng& rng, int n) {
  switch (n) {
    case 4: {
      static const std::vector<int> opts[] = {{2, 2}, {4}};
      return opts[rng.below(2)];
    }
    case 6: {
      static const std::vector<int> opts[] = {{2, 3}, {3, 2}, {6}};
      return opts[rng.below(3)];
    }
    default: {
      static const std::vector<int> opts[] = {{3, 3}, {9}};
      return opts[rng.below(2)];
    }
  }
}

// pi = product of per-unit conditionals of exp((qbar + beta log tau) / lambda).
std::vector<double> factored_policy(const std::vector<int>& slots, const std::vector<double>& qbar,
                                    const std::vector<double>& logtau, double beta, double lambda,
                                    double* worst) {
  JointQTable table(slots, beta / lambda);
  for (std::size_t i = 0; i < qbar.size(); ++i) {
    auto a = table.action_at(i);
    table.set(a, qbar[i] / lambda, logtau[i]);
  }
  auto factored = factored_joint_policy(table);
  auto joint = joint_policy(table);
  for (std::size_t i = 0; i < joint.size(); ++i) {
    *worst = std::max(*worst, std::abs(joint[i] - factored[i]));
  }
  return factored;
}

double kl(std::span<const double> p, std::span<const double> tau) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * (std::log(p[i]) - std::log(tau[i]));
  }
  return s;
}

// max over pi of pi.u - beta KL(pi || tau).
double regularized_best(std::span<const double> u, std::span<const double> tau, double beta) {
  if (beta <= 0.0) return *std::max_element(u.begin(), u.end());
  std::vector<double> z(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) z[i] = std::log(tau[i]) + u[i] / beta;
  return beta * log_sum_exp(z);
}

}  // namespace

int MatrixGame::n1() const { return product(slots1); }
int MatrixGame::n2() const { return product(slots2); }

void MatrixGame::validate() const {
  if (slots1.empty() || slots2.empty()) throw Error("each player needs at least one slot");
  const int a = n1(), b = n2();
  if (payoff.size() != static_cast<std::size_t>(a) * b) throw Error("payoff has the wrong shape");
  if (tau1.size() != static_cast<std::size_t>(a) || tau2.size() != static_cast<std::size_t>(b)) {
    throw Error("anchor has the wrong size");
  }
  delta_bound(tau1);
  delta_bound(tau2);
}

MatrixGame MatrixGame::rock_paper_scissors() {
  MatrixGame g;
  g.slots1 = {3};
  g.slots2 = {3};
  g.payoff = {0, -1, 1, 1, 0, -1, -1, 1, 0};
  g.tau1 = uniform(3);
  g.tau2 = uniform(3);
  return g;
}

MatrixGame MatrixGame::matching_pennies() {
  MatrixGame g;
  g.slots1 = {2};
  g.slots2 = {2};
  g.payoff = {0.5, -0.5, -0.5, 0.5};
  g.tau1 = uniform(2);
  g.tau2 = uniform(2);
  return g;
}

MatrixGame MatrixGame::random_factored(Rng& rng, bool skewed_anchor) {
  static const int kSizes[] = {4, 6, 9};
  MatrixGame g;
  g.slots1 = split_slots(rng, kSizes[rng.below(3)]);
  g.slots2 = split_slots(rng, kSizes[rng.below(3)]);
  const int a = g.n1(), b = g.n2();
  g.payoff.resize(static_cast<std::size_t>(a) * b);
  for (double& x : g.payoff) x = 2.0 * rng.uniform() - 1.0;
  g.tau1 = skewed_anchor ? skewed(rng, a) : uniform(a);
  g.tau2 = skewed_anchor ? skewed(rng, b) : uniform(b);
  return g;
}

double delta_bound(std::span<const double> anchor) {
  if (anchor.empty()) throw Error("anchor is empty");
  double worst = 0.0;
  for (double p : anchor) {
    if (!(p > 0.0)) throw Error("anchor assigns zero probability to an action");
    worst = std::max(worst, -std::log(p));
  }
  return worst;
}

std::pair<double, double> regularized_exploitability(const MatrixGame& g,
                                                     std::span<const double> pi1,
                                                     std::span<const double> pi2, double beta1,
                                                     double beta2) {
  const int a = g.n1(), b = g.n2();
  std::vector<double> u1(a, 0.0), u2(b, 0.0);
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      u1[i] += g.at(i, j) * pi2[j];
      u2[j] -= g.at(i, j) * pi1[i];
    }
  }
  double v = 0.0;
  for (int i = 0; i < a; ++i) v += pi1[i] * u1[i];
  const double r1 = beta1 > 0.0 ? beta1 * kl(pi1, g.tau1) : 0.0;
  const double r2 = beta2 > 0.0 ? beta2 * kl(pi2, g.tau2) : 0.0;
  return {regularized_best(u1, g.tau1, beta1) - (v - r1),
          regularized_best(u2, g.tau2, beta2) - (-v - r2)};
}

std::pair<double, double> exploitability(const MatrixGame& g, std::span<const double> pi1,
                                         std::span<const double> pi2) {
  auto e = regularized_exploitability(g, pi1, pi2, 0.0, 0.0);
  return {std::max(0.0, e.first), std::max(0.0, e.second)};
}

double lab_temperature(const LabConfig& cfg, double beta) {
  if (cfg.temperature > 0.0) return cfg.temperature;
  return beta > 0.0 ? beta : 0.01;
}

LabResult run_factored_pikl(const MatrixGame& g, const LabConfig& cfg) {
  g.validate();
  if (cfg.iterations < 1) throw Error("iterations must be >= 1");
  if (cfg.beta1 < 0.0 || cfg.beta2 < 0.0) throw Error("beta must be >= 0");
  const int a = g.n1(), b = g.n2();
  const double lam1 = lab_temperature(cfg, cfg.beta1);
  const double lam2 = lab_temperature(cfg, cfg.beta2);
  std::vector<double> logtau1(a), logtau2(b);
  for (int i = 0; i < a; ++i) logtau1[i] = std::log(g.tau1[i]);
  for (int j = 0; j < b; ++j) logtau2[j] = std::log(g.tau2[j]);

  Rng rng(mix_seed(cfg.seed, {0x6c6162ULL}));
  std::vector<double> pi1 = uniform(a), pi2 = uniform(b);
  std::vector<double> sum1(a, 0.0), sum2(b, 0.0), qbar1(a), qbar2(b);
  LabResult res;
  res.average1.assign(a, 0.0);
  res.average2.assign(b, 0.0);
  for (int t = 1; t <= cfg.iterations; ++t) {
    if (cfg.update == UpdateMode::kExactExpectation) {
      for (int i = 0; i < a; ++i) {
        for (int j = 0; j < b; ++j) {
          sum1[i] += g.at(i, j) * pi2[j];
          sum2[j] -= g.at(i, j) * pi1[i];
        }
      }
    } else {
      const int s1 = static_cast<int>(rng.categorical(pi1));
      const int s2 = static_cast<int>(rng.categorical(pi2));
      for (int i = 0; i < a; ++i) sum1[i] += g.at(i, s2);
      for (int j = 0; j < b; ++j) sum2[j] -= g.at(s1, j);
    }
    for (int i = 0; i < a; ++i) qbar1[i] = sum1[i] / t;
    for (int j = 0; j < b; ++j) qbar2[j] = sum2[j] / t;
    pi1 = factored_policy(g.slots1, qbar1, logtau1, cfg.beta1, lam1, &res.max_factorization_error);
    pi2 = factored_policy(g.slots2, qbar2, logtau2, cfg.beta2, lam2, &res.max_factorization_error);
    for (int i = 0; i < a; ++i) res.average1[i] += (pi1[i] - res.average1[i]) / t;
    for (int j = 0; j < b; ++j) res.average2[j] += (pi2[j] - res.average2[j]) / t;
    auto e = exploitability(g, res.average1, res.average2);
    auto r = regularized_exploitability(g, res.average1, res.average2, cfg.beta1, cfg.beta2);
    res.trace.push_back({t, e.first, e.second, r.first, r.second});
  }
  return res;
}

void write_lab_trace(std::ostream& out, const LabResult& res) {
  for (const auto& p : res.trace) {
    out << p.iteration << '\t' << text::format_real(p.expl1) << '\t' << text::format_real(p.expl2)
        << '\n';
  }
}

bool moving_average_non_increasing(std::span<const double> xs, std::size_t burn_in,
                                   std::size_t window, double slack, double* worst) {
  double rise = -std::numeric_limits<double>::infinity();
  if (window == 0) throw Error("window must be positive");
  if (xs.size() >= burn_in + window) {
    // Consecutive window sums differ by one entry in and one out, so the
    // rise is (x[i + window] - x[i]) / window.
    for (std::size_t i = burn_in; i + window < xs.size(); ++i) {
      rise = std::max(rise, (xs[i + window] - xs[i]) / static_cast<double>(window));
    }
  }
  if (worst != nullptr) *worst = rise;
  return !(rise > slack);
}

}  // namespace dipeq

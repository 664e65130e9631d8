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

#ifndef DIPEQ_RNG_HPP
#define DIPEQ_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace dipeq {

// Derives a child seed from a parent seed and a list of stream labels.
// splitmix64 finalizer over each word; stable across platforms.
std::uint64_t mix_seed(std::uint64_t seed,
                       std::initializer_list<std::uint64_t> labels);

// Random source with platform-independent output. The standard
// distributions are implementation-defined, so conversions from raw
// mt19937_64 words are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  // Index drawn proportionally to non-negative weights.
  std::size_t categorical(std::span<const double> weights);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dipeq

#endif  // DIPEQ_RNG_HPP

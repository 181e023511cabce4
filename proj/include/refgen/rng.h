// Copyright 2026 The Refgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REFGEN_RNG_H_
#define REFGEN_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace refgen {

// Seeded random source with platform-independent output. The standard
// distributions are implementation-defined, so bounded integers and doubles
// are derived here directly from the 64-bit engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Seed for an independent stream `stream` of master seed `seed`.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
  int uniform_int(int lo, int hi);
  // Uniform index in [0, n). Requires n > 0.
  std::size_t index(std::size_t n);
  // Uniform double in [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool bernoulli(double p) { return uniform01() < p; }

  // Index drawn with probability proportional to weights[i].
  std::size_t weighted_index(std::span<const double> weights);

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[index(items.size())];
  }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[index(items.size())];
  }

 private:
  std::uint64_t bounded(std::uint64_t range);

  std::mt19937_64 engine_;
};

}  // namespace refgen

#endif  // REFGEN_RNG_H_

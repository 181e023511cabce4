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

#include "refgen/rng.h"

#include <cassert>
#include <numeric>

namespace refgen {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::bounded(std::uint64_t range) {
  // Rejection sampling on the top of the 64-bit range; unbiased.
  assert(range > 0);
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % range;
}

int Rng::uniform_int(int lo, int hi) {
  assert(lo <= hi);
  const auto range = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) -
                                                static_cast<std::int64_t>(lo) + 1);
  return static_cast<int>(lo + static_cast<std::int64_t>(bounded(range)));
}

std::size_t Rng::index(std::size_t n) { return static_cast<std::size_t>(bounded(n)); }

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::weighted_index(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  assert(total > 0.0);
  double x = uniform01() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  // Rounding can leave x marginally past the last bucket.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return 0;
}

}  // namespace refgen

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

#include "refgen/mask.h"

#include <string>

#include "doctest.h"
#include "refgen/errors.h"
#include "refgen/rng.h"

namespace refgen {
namespace {

ErrorCode decode_error(const std::string& rle, int w, int h) {
  try {
    decode_rle(rle, w, h);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decode_rle accepted " << rle);
  return ErrorCode::kFormat;
}

TEST_CASE("all-background mask is one run") {
  CHECK(encode_rle(Mask(320, 320)) == "102400");
  CHECK(decode_rle("102400", 320, 320) == Mask(320, 320));
}

TEST_CASE("4x4 alternating pixels are sixteen runs of one after a leading zero") {
  // Alternation in row-major order, so every run has length one.
  Mask m(4, 4);
  for (int i = 0; i < 16; ++i) m.set_index(i, i % 2 == 0);
  CHECK(encode_rle(m) == "0 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1");
  CHECK(decode_rle(encode_rle(m), 4, 4) == m);
  Mask shifted(4, 4);
  for (int i = 0; i < 16; ++i) shifted.set_index(i, i % 2 == 1);
  CHECK(encode_rle(shifted) == "1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1");
}

TEST_CASE("a 4x4 checkerboard merges runs across row ends") {
  Mask m(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) m.set(x, y, (x + y) % 2 == 0);
  }
  CHECK(encode_rle(m) == "0 1 1 1 2 1 1 2 1 1 2 1 1 1");
  CHECK(decode_rle(encode_rle(m), 4, 4) == m);
}

TEST_CASE("corrupt run lists") {
  CHECK(decode_error("15", 4, 4) == ErrorCode::kCorruptMask);
  CHECK(decode_error("10 7", 4, 4) == ErrorCode::kCorruptMask);
  CHECK(decode_error("4 0 12", 4, 4) == ErrorCode::kCorruptMask);
  CHECK(decode_error("4 x 11", 4, 4) == ErrorCode::kCorruptMask);
  CHECK(decode_error("-1 17", 4, 4) == ErrorCode::kCorruptMask);
}

TEST_CASE("random masks round-trip through RLE and PBM") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const int w = rng.uniform_int(1, 70);
    const int h = rng.uniform_int(1, 70);
    const double p = rng.uniform01();
    Mask m(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) m.set(x, y, rng.bernoulli(p));
    }
    REQUIRE(decode_rle(encode_rle(m), w, h) == m);
    REQUIRE(from_pbm(to_pbm(m)) == m);
  }
}

TEST_CASE("set algebra") {
  Mask a(10, 3);
  Mask b(10, 3);
  for (int x = 0; x < 6; ++x) a.set(x, 1);
  for (int x = 3; x < 9; ++x) b.set(x, 1);
  CHECK(a.count() == 6);
  CHECK(a.intersection_count(b) == 3);
  CHECK(a.union_count(b) == 9);
  CHECK(a.complement().count() == 24);
  CHECK_FALSE(a.is_subset_of(b));
  Mask c = a;
  c &= b;
  CHECK(c.is_subset_of(a));
  CHECK_THROWS_AS(a.intersection_count(Mask(3, 10)), Error);
}

}  // namespace
}  // namespace refgen

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

#ifndef REFGEN_MASK_H_
#define REFGEN_MASK_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace refgen {

// Row-major binary image, bit-packed.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t pixel_count() const {
    return static_cast<std::int64_t>(width_) * height_;
  }

  bool get(int x, int y) const { return get_index(index(x, y)); }
  void set(int x, int y, bool value = true) { set_index(index(x, y), value); }
  bool get_index(std::int64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  void set_index(std::int64_t i, bool value = true) {
    if (value) {
      words_[i >> 6] |= 1ULL << (i & 63);
    } else {
      words_[i >> 6] &= ~(1ULL << (i & 63));
    }
  }

  // Number of foreground pixels.
  std::int64_t count() const;
  bool empty() const { return count() == 0; }
  bool same_shape(const Mask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  // Throw Error(kDimensionMismatch) on differing dimensions.
  std::int64_t intersection_count(const Mask& other) const;
  std::int64_t union_count(const Mask& other) const;
  bool is_subset_of(const Mask& other) const;
  Mask& operator|=(const Mask& other);
  Mask& operator&=(const Mask& other);
  Mask complement() const;

  bool operator==(const Mask&) const = default;

 private:
  std::int64_t index(int x, int y) const {
    return static_cast<std::int64_t>(y) * width_ + x;
  }
  void require_same_shape(const Mask& other) const;
  void clear_padding();

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint64_t> words_;
};

// Run-length encoding: space-separated run lengths over the row-major pixel
// sequence, alternating background/foreground and starting with background
// (a leading 0 when the first pixel is foreground).
std::string encode_rle(const Mask& mask);
// Throws Error(kCorruptMask) when runs do not sum to width * height, contain
// a non-leading zero-length run, or are not non-negative integers.
Mask decode_rle(std::string_view rle, int width, int height);

// Plain-text "P1" bitmap for debugging.
std::string to_pbm(const Mask& mask);
Mask from_pbm(std::string_view text);

}  // namespace refgen

#endif  // REFGEN_MASK_H_

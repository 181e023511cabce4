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

#include <bit>
#include <charconv>
#include <sstream>

#include "refgen/errors.h"

namespace refgen {

Mask::Mask(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kDimensionMismatch, "mask dimensions must be non-negative");
  }
  words_.assign(static_cast<std::size_t>((pixel_count() + 63) / 64), 0);
}

std::int64_t Mask::count() const {
  std::int64_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

void Mask::require_same_shape(const Mask& other) const {
  if (!same_shape(other)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(width_) + "x" + std::to_string(height_) + " vs " +
                    std::to_string(other.width_) + "x" + std::to_string(other.height_));
  }
}

std::int64_t Mask::intersection_count(const Mask& other) const {
  require_same_shape(other);
  std::int64_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) n += std::popcount(words_[i] & other.words_[i]);
  return n;
}

std::int64_t Mask::union_count(const Mask& other) const {
  require_same_shape(other);
  std::int64_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) n += std::popcount(words_[i] | other.words_[i]);
  return n;
}

bool Mask::is_subset_of(const Mask& other) const {
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

Mask& Mask::operator|=(const Mask& other) {
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

Mask& Mask::operator&=(const Mask& other) {
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

void Mask::clear_padding() {
  const std::int64_t tail = pixel_count() & 63;
  if (tail != 0 && !words_.empty()) words_.back() &= (1ULL << tail) - 1;
}

Mask Mask::complement() const {
  Mask out = *this;
  for (std::uint64_t& w : out.words_) w = ~w;
  out.clear_padding();
  return out;
}

std::string encode_rle(const Mask& mask) {
  std::string out;
  bool current = false;
  std::int64_t run = 0;
  bool first = true;
  auto flush = [&](std::int64_t length) {
    if (!first) out.push_back(' ');
    out += std::to_string(length);
    first = false;
  };
  const std::int64_t n = mask.pixel_count();
  for (std::int64_t i = 0; i < n; ++i) {
    const bool v = mask.get_index(i);
    if (v != current) {
      flush(run);
      current = v;
      run = 0;
    }
    ++run;
  }
  if (run > 0 || first) flush(run);
  return out;
}

Mask decode_rle(std::string_view rle, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kCorruptMask, "mask dimensions must be positive");
  }
  Mask mask(width, height);
  const std::int64_t total = mask.pixel_count();
  std::int64_t pos = 0;
  bool foreground = false;
  std::size_t run_index = 0;
  std::size_t i = 0;
  while (i < rle.size()) {
    while (i < rle.size() && rle[i] == ' ') ++i;
    if (i >= rle.size()) break;
    std::int64_t length = 0;
    const char* begin = rle.data() + i;
    const char* end = rle.data() + rle.size();
    auto [ptr, ec] = std::from_chars(begin, end, length);
    if (ec != std::errc() || length < 0 || (ptr != end && *ptr != ' ')) {
      throw Error(ErrorCode::kCorruptMask, "malformed run at offset " + std::to_string(i));
    }
    if (length == 0 && run_index != 0) {
      throw Error(ErrorCode::kCorruptMask,
                  "zero-length run at position " + std::to_string(run_index));
    }
    if (pos + length > total) {
      throw Error(ErrorCode::kCorruptMask, "runs exceed " + std::to_string(total) + " pixels");
    }
    if (foreground) {
      for (std::int64_t p = pos; p < pos + length; ++p) mask.set_index(p);
    }
    pos += length;
    foreground = !foreground;
    ++run_index;
    i = static_cast<std::size_t>(ptr - rle.data());
  }
  if (pos != total) {
    throw Error(ErrorCode::kCorruptMask, "runs sum to " + std::to_string(pos) +
                                             ", expected " + std::to_string(total));
  }
  return mask;
}

std::string to_pbm(const Mask& mask) {
  std::string out = "P1\n" + std::to_string(mask.width()) + " " +
                    std::to_string(mask.height()) + "\n";
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (x > 0) out.push_back(' ');
      out.push_back(mask.get(x, y) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

Mask from_pbm(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic;
  int width = 0;
  int height = 0;
  if (!(in >> magic) || magic != "P1" || !(in >> width >> height) || width <= 0 ||
      height <= 0) {
    throw Error(ErrorCode::kCorruptMask, "bad P1 header");
  }
  Mask mask(width, height);
  for (std::int64_t i = 0; i < mask.pixel_count(); ++i) {
    char c = 0;
    if (!(in >> c) || (c != '0' && c != '1')) {
      throw Error(ErrorCode::kCorruptMask, "truncated or invalid P1 body");
    }
    if (c == '1') mask.set_index(i);
  }
  return mask;
}

}  // namespace refgen

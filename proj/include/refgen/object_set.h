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

#ifndef REFGEN_OBJECT_SET_H_
#define REFGEN_OBJECT_SET_H_

#include <bit>
#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace refgen {

// Set of object ids of one scene. Ids are dense in [0, kMaxObjects).
class ObjectSet {
 public:
  static constexpr int kMaxObjects = 64;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    using pointer = const int*;
    using reference = int;

    iterator() = default;
    explicit iterator(std::uint64_t rest) : rest_(rest) {}
    int operator*() const { return std::countr_zero(rest_); }
    iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr ObjectSet() = default;
  ObjectSet(std::initializer_list<int> ids) {
    for (int id : ids) insert(id);
  }

  static ObjectSet all(int count) {
    assert(count >= 0 && count <= kMaxObjects);
    ObjectSet s;
    s.bits_ = count == kMaxObjects ? ~0ULL : ((1ULL << count) - 1);
    return s;
  }
  static ObjectSet from_bits(std::uint64_t bits) {
    ObjectSet s;
    s.bits_ = bits;
    return s;
  }
  static ObjectSet from_ids(const std::vector<int>& ids) {
    ObjectSet s;
    for (int id : ids) s.insert(id);
    return s;
  }

  void insert(int id) {
    assert(id >= 0 && id < kMaxObjects);
    bits_ |= 1ULL << id;
  }
  void erase(int id) {
    assert(id >= 0 && id < kMaxObjects);
    bits_ &= ~(1ULL << id);
  }
  bool contains(int id) const {
    return id >= 0 && id < kMaxObjects && ((bits_ >> id) & 1ULL) != 0;
  }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  // Smallest id; requires a nonempty set.
  int first() const { return std::countr_zero(bits_); }
  std::uint64_t bits() const { return bits_; }

  bool is_subset_of(const ObjectSet& other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }

  std::vector<int> to_vector() const { return {begin(), end()}; }

  ObjectSet operator&(const ObjectSet& o) const { return from_bits(bits_ & o.bits_); }
  ObjectSet operator|(const ObjectSet& o) const { return from_bits(bits_ | o.bits_); }
  bool operator==(const ObjectSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace refgen

#endif  // REFGEN_OBJECT_SET_H_

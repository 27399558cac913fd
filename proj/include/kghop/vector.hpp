#pragma once
// Sparse boolean vectors over a dense id space.
//
// An IdSet is the canonical encoding of a {0,1} row vector: a strictly
// increasing list of the nonzero positions. Frontiers (entity vectors) and
// activated-triple vectors are both IdSets.
//
// IdAccumulator builds an IdSet from an unordered stream of ids that may
// contain duplicates. It starts as an append-only list and switches to a
// dense bitmask once the number of pushes exceeds 1/32 of the universe, so
// expanding a hub frontier costs O(universe / 64) words instead of a sort.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "kghop/error.hpp"
#include "kghop/ids.hpp"

namespace kghop {

template <typename Tag>
class IdSet {
 public:
  using id_type = Id<Tag>;
  using const_iterator = typename std::vector<id_type>::const_iterator;

  IdSet() = default;

  IdSet(std::initializer_list<std::uint32_t> values) {
    ids_.reserve(values.size());
    for (auto v : values) ids_.push_back(id_type{v});
    canonicalize();
  }

  static IdSet from_unsorted(std::vector<id_type> ids) {
    IdSet s;
    s.ids_ = std::move(ids);
    s.canonicalize();
    return s;
  }

  // Caller guarantees strictly increasing input.
  static IdSet from_sorted_unique(std::vector<id_type> ids) {
    IdSet s;
    s.ids_ = std::move(ids);
    return s;
  }

  bool contains(id_type id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const_iterator begin() const noexcept { return ids_.begin(); }
  const_iterator end() const noexcept { return ids_.end(); }
  std::span<const id_type> ids() const noexcept { return ids_; }
  id_type operator[](std::size_t i) const { return ids_[i]; }

  // Largest id + 1, or 0 when empty.
  std::uint64_t extent() const noexcept {
    return ids_.empty() ? 0 : std::uint64_t{ids_.back().value} + 1;
  }

  friend bool operator==(const IdSet&, const IdSet&) = default;

 private:
  void canonicalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<id_type> ids_;
};

using EntityVector = IdSet<EntityTag>;
using TripleVector = IdSet<TripleTag>;

template <typename Tag>
IdSet<Tag> set_union(const IdSet<Tag>& a, const IdSet<Tag>& b) {
  std::vector<Id<Tag>> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IdSet<Tag>::from_sorted_unique(std::move(out));
}

template <typename Tag>
IdSet<Tag> set_difference(const IdSet<Tag>& a, const IdSet<Tag>& b) {
  std::vector<Id<Tag>> out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IdSet<Tag>::from_sorted_unique(std::move(out));
}

template <typename Tag>
std::size_t intersection_size(const IdSet<Tag>& a, const IdSet<Tag>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

template <typename Tag>
bool is_subset(const IdSet<Tag>& a, const IdSet<Tag>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// |A ∩ B| / |A ∪ B|; two empty sets compare as identical (1.0).
template <typename Tag>
double jaccard(const IdSet<Tag>& a, const IdSet<Tag>& b) {
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t inter = intersection_size(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

template <typename Tag>
class IdAccumulator {
 public:
  using id_type = Id<Tag>;

  explicit IdAccumulator(std::uint64_t universe)
      : universe_(universe), dense_threshold_(universe / 32) {}

  void push(id_type id) {
    if (dense_) {
      bits_[id.value >> 6] |= std::uint64_t{1} << (id.value & 63);
      return;
    }
    sparse_.push_back(id);
    if (sparse_.size() > dense_threshold_) to_dense();
  }

  template <typename Range>
  void push_all(const Range& ids) {
    for (auto id : ids) push(id);
  }

  bool is_dense() const noexcept { return dense_; }

  IdSet<Tag> finish() && {
    if (!dense_) return IdSet<Tag>::from_unsorted(std::move(sparse_));
    std::vector<id_type> out;
    std::size_t count = 0;
    for (auto w : bits_) count += static_cast<std::size_t>(std::popcount(w));
    out.reserve(count);
    for (std::size_t word = 0; word < bits_.size(); ++word) {
      std::uint64_t w = bits_[word];
      while (w != 0) {
        const int bit = std::countr_zero(w);
        out.push_back(id_type{static_cast<std::uint32_t>(word * 64 + bit)});
        w &= w - 1;
      }
    }
    return IdSet<Tag>::from_sorted_unique(std::move(out));
  }

 private:
  void to_dense() {
    dense_ = true;
    bits_.assign((universe_ + 63) / 64, 0);
    for (auto id : sparse_) bits_[id.value >> 6] |= std::uint64_t{1} << (id.value & 63);
    sparse_.clear();
    sparse_.shrink_to_fit();
  }

  std::uint64_t universe_;
  std::uint64_t dense_threshold_;
  bool dense_ = false;
  std::vector<id_type> sparse_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace kghop

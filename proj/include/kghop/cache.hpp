#pragma once
// Fixed-capacity LRU cache with load/eviction accounting.
//
// Capacity counts entries (whole subgraphs), not bytes. Every successful get
// refreshes recency. A loader that throws leaves contents, recency and
// counters exactly as they were.

#include <cstddef>
#include <cstdint>
#include <list>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kghop/error.hpp"

namespace kghop {

struct CacheCounters {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t loads = 0;
  std::uint64_t evictions = 0;

  // hits / (hits + misses); 0 before the first access.
  double hit_rate() const {
    const auto total = hits + misses;
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  }

  friend bool operator==(const CacheCounters&, const CacheCounters&) = default;
};

template <typename Key, typename Value>
class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidArgument("cache capacity must be >= 1");
  }

  // The index holds iterators into the list; copies would alias them.
  LruCache(const LruCache&) = delete;
  LruCache& operator=(const LruCache&) = delete;
  LruCache(LruCache&&) noexcept = default;
  LruCache& operator=(LruCache&&) noexcept = default;

  template <typename Loader>
  Value get(const Key& key, Loader&& loader) {
    if (auto it = index_.find(key); it != index_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      ++counters_.hits;
      if (record_trace_) trace_.push_back(key);
      return it->second->second;
    }
    Value value = loader(key);  // may throw; nothing has been touched yet
    if (order_.size() == capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
      ++counters_.evictions;
    }
    order_.emplace_front(key, value);
    index_.emplace(key, order_.begin());
    ++counters_.misses;
    ++counters_.loads;
    if (record_trace_) trace_.push_back(key);
    return value;
  }

  bool contains(const Key& key) const { return index_.contains(key); }
  std::size_t size() const noexcept { return order_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

  // Most recently used first.
  std::vector<Key> resident_keys() const {
    std::vector<Key> keys;
    keys.reserve(order_.size());
    for (const auto& [k, v] : order_) keys.push_back(k);
    return keys;
  }

  CacheCounters snapshot_counters() const { return counters_; }

  void reset_counters() { counters_ = {}; }

  void clear() {
    order_.clear();
    index_.clear();
  }

  // Records every successful access key, for offline replay.
  void record_trace(bool on) { record_trace_ = on; }
  const std::vector<Key>& trace() const noexcept { return trace_; }
  void clear_trace() { trace_.clear(); }

 private:
  using Entry = std::pair<Key, Value>;

  std::size_t capacity_;
  std::list<Entry> order_;
  std::unordered_map<Key, typename std::list<Entry>::iterator> index_;
  CacheCounters counters_;
  bool record_trace_ = false;
  std::vector<Key> trace_;
};

// Per-subgraph retrieval cost under hit rate h:
//   h * tau_mm + (1 - h) * (tau_mm + tau_io)
struct CostModel {
  double hit_rate = 0.0;
  double tau_mm_ms = 0.0;
  double tau_io_ms = 0.0;
};

inline double expected_cost(const CostModel& c) {
  if (!(c.hit_rate >= 0.0 && c.hit_rate <= 1.0)) throw InvalidArgument("hit rate must lie in [0, 1]");
  if (!(c.tau_mm_ms >= 0.0) || !(c.tau_io_ms >= 0.0)) throw InvalidArgument("times must be non-negative");
  return c.hit_rate * c.tau_mm_ms + (1.0 - c.hit_rate) * (c.tau_mm_ms + c.tau_io_ms);
}

}  // namespace kghop

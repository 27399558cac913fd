#pragma once
// Reference traversals used to check the incidence engine. They work from the
// raw triple list with plain adjacency lists and a queue, sharing no code with
// the sparse-product path.

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "kghop/error.hpp"
#include "kghop/ids.hpp"
#include "kghop/vector.hpp"

namespace kghop {

struct BfsLayers {
  std::vector<EntityVector> layers;      // layers[h-1]: distance exactly h
  std::vector<EntityVector> cumulative;  // cumulative[h-1]: distance 1..h
};

inline BfsLayers oracle_bfs(const EntityVector& q0, std::size_t k, std::span<const Triple> triples,
                            std::uint64_t num_entities) {
  std::vector<std::vector<std::uint32_t>> adjacency(num_entities);
  for (const auto& t : triples) adjacency[t.subject.value].push_back(t.object.value);

  constexpr std::uint32_t kUnseen = 0xFFFFFFFFu;
  std::vector<std::uint32_t> distance(num_entities, kUnseen);
  std::deque<std::uint32_t> queue;
  for (auto e : q0) {
    distance[e.value] = 0;
    queue.push_back(e.value);
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (distance[u] == k) continue;
    for (auto v : adjacency[u]) {
      if (distance[v] == kUnseen) {
        distance[v] = distance[u] + 1;
        queue.push_back(v);
      }
    }
  }

  BfsLayers out;
  std::vector<std::vector<EntityId>> by_layer(k);
  for (std::uint32_t v = 0; v < num_entities; ++v) {
    if (distance[v] != kUnseen && distance[v] >= 1 && distance[v] <= k) by_layer[distance[v] - 1].push_back(EntityId{v});
  }
  std::vector<EntityId> running;
  for (std::size_t h = 0; h < k; ++h) {
    running.insert(running.end(), by_layer[h].begin(), by_layer[h].end());
    out.layers.push_back(EntityVector::from_unsorted(by_layer[h]));
    out.cumulative.push_back(EntityVector::from_unsorted(running));
  }
  return out;
}

inline constexpr std::uint64_t kWalkOracleMaxEntities = 1000;

// Endpoints of walks of length exactly k: the k-fold image of q0 under the
// edge relation, by nested iteration over the triple list.
inline EntityVector oracle_walk(const EntityVector& q0, std::size_t k, std::span<const Triple> triples,
                                std::uint64_t num_entities) {
  if (num_entities > kWalkOracleMaxEntities) {
    throw InvalidArgument("walk oracle is limited to " + std::to_string(kWalkOracleMaxEntities) + " entities");
  }
  std::vector<char> current(num_entities, 0);
  for (auto e : q0) current[e.value] = 1;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<char> next(num_entities, 0);
    for (const auto& t : triples) {
      if (current[t.subject.value]) next[t.object.value] = 1;
    }
    current.swap(next);
  }
  std::vector<EntityId> ids;
  for (std::uint32_t v = 0; v < num_entities; ++v) {
    if (current[v]) ids.push_back(EntityId{v});
  }
  return EntityVector::from_sorted_unique(std::move(ids));
}

}  // namespace kghop

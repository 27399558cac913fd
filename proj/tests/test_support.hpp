#pragma once
// Shared fixtures for the unit tests.

#include <sstream>
#include <string>
#include <vector>

#include "kghop/kghop.hpp"

namespace kghop::testing {

// t0=(A,r1,B) t1=(B,r2,C) t2=(A,r1,C) t3=(C,r3,A)
inline constexpr const char* kTinyTsv = "A\tr1\tB\nB\tr2\tC\nA\tr1\tC\nC\tr3\tA\n";

inline constexpr std::uint32_t A = 0, B = 1, C = 2;

inline TripleTable tiny_table() {
  std::istringstream in(kTinyTsv);
  return ingest_triples(in);
}

inline IncidenceGraph tiny_graph() {
  const auto t = tiny_table();
  return build_incidence(t.triples, t.counts());
}

inline std::vector<std::uint32_t> values(const EntityVector& v) {
  std::vector<std::uint32_t> out;
  for (auto e : v) out.push_back(e.value);
  return out;
}

inline std::vector<std::uint32_t> values(const TripleVector& v) {
  std::vector<std::uint32_t> out;
  for (auto t : v) out.push_back(t.value);
  return out;
}

// Mixed generator used by the property tests: even seeds give G(n, M),
// odd seeds a Zipf graph.
inline SyntheticGraph random_graph(std::uint64_t seed, std::uint64_t entities, std::uint64_t edges) {
  return seed % 2 == 0 ? erdos_renyi(entities, edges, 4, seed) : power_law(entities, edges, 4, 1.1, seed);
}

// Dense boolean matrix power q0 * (SUB * OBJ)^h, built entry by entry from
// the definitions of SUB and OBJ. Only for tiny graphs.
inline std::vector<EntityVector> dense_walk_powers(const EntityVector& q0, std::size_t k, const SyntheticGraph& g) {
  const auto n = g.counts.entities;
  const auto t = g.triples.size();
  std::vector<std::vector<char>> sub(n, std::vector<char>(t, 0));
  std::vector<std::vector<char>> obj(t, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < t; ++i) {
    sub[g.triples[i].subject.value][i] = 1;
    obj[i][g.triples[i].object.value] = 1;
  }
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < t; ++j)
      if (sub[i][j])
        for (std::size_t c = 0; c < n; ++c) adj[i][c] = adj[i][c] || obj[j][c];
  std::vector<char> row(n, 0);
  for (auto e : q0) row[e.value] = 1;
  std::vector<EntityVector> out;
  for (std::size_t h = 0; h < k; ++h) {
    std::vector<char> next(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (row[i])
        for (std::size_t c = 0; c < n; ++c) next[c] = next[c] || adj[i][c];
    row = next;
    std::vector<EntityId> ids;
    for (std::uint32_t c = 0; c < n; ++c)
      if (row[c]) ids.push_back(EntityId{c});
    out.push_back(EntityVector::from_unsorted(ids));
  }
  return out;
}

inline PartitionedGraph in_memory_partitioned(const SyntheticGraph& g, std::size_t m, std::size_t cache_capacity,
                                              PartitionStrategy strategy = PartitionStrategy::lpt) {
  auto plan = make_plan(strategy, g.triples, g.counts.entities, m);
  auto shards = materialize_subgraphs(plan, g.triples, g.counts.relations);
  return PartitionedGraph(std::move(plan), std::make_shared<MemorySubgraphStore>(std::move(shards)), cache_capacity);
}

inline std::size_t distinct_subjects(const std::vector<Triple>& triples) {
  std::vector<std::uint32_t> s;
  for (const auto& t : triples) s.push_back(t.subject.value);
  std::sort(s.begin(), s.end());
  return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

}  // namespace kghop::testing

#pragma once
// Subject-cohesive partitioning.
//
// A plan maps every entity that is the subject of at least one triple to a
// partition; all triples of that subject go with it. Entities that only ever
// appear as objects carry kNoPartition.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kghop/error.hpp"
#include "kghop/incidence.hpp"

namespace kghop {

inline constexpr std::uint32_t kNoPartition = 0xFFFFFFFFu;

enum class PartitionStrategy { lpt, hash };

inline std::string_view to_string(PartitionStrategy s) { return s == PartitionStrategy::lpt ? "lpt" : "hash"; }

inline PartitionStrategy parse_strategy(std::string_view name) {
  if (name == "lpt") return PartitionStrategy::lpt;
  if (name == "hash") return PartitionStrategy::hash;
  throw InvalidArgument("unknown partition strategy '" + std::string(name) + "'");
}

struct PartitionPlan {
  std::size_t m = 0;
  std::vector<std::uint32_t> assignment;   // indexed by EntityId
  std::vector<std::uint64_t> loads;        // triples per partition
  std::vector<std::uint64_t> subjects;     // subjects per partition

  std::uint32_t partition_of(EntityId e) const {
    return e.value < assignment.size() ? assignment[e.value] : kNoPartition;
  }

  friend bool operator==(const PartitionPlan&, const PartitionPlan&) = default;
};

inline std::vector<std::uint64_t> out_degrees(std::span<const Triple> triples, std::uint64_t num_entities) {
  std::vector<std::uint64_t> degree(num_entities, 0);
  for (const auto& t : triples) ++degree[t.subject.value];
  return degree;
}

// Builds a plan from a caller-chosen subject assignment. Any partitioning
// strategy can be plugged in through here; loads and subject counts are
// recomputed and checked.
inline PartitionPlan plan_from_assignment(std::span<const Triple> triples, std::uint64_t num_entities,
                                          std::size_t m, std::vector<std::uint32_t> assignment) {
  if (m == 0) throw InvalidArgument("partition count m must be >= 1");
  if (assignment.size() != num_entities) throw InvalidArgument("assignment must cover every entity id");
  const auto degree = out_degrees(triples, num_entities);
  PartitionPlan plan;
  plan.m = m;
  plan.loads.assign(m, 0);
  plan.subjects.assign(m, 0);
  for (std::uint64_t e = 0; e < num_entities; ++e) {
    const auto p = assignment[e];
    if (degree[e] == 0) {
      if (p != kNoPartition) throw InvalidArgument("entity " + std::to_string(e) + " has no triples but is assigned");
      continue;
    }
    if (p >= m) throw InvalidArgument("subject " + std::to_string(e) + " has no valid partition");
    plan.loads[p] += degree[e];
    ++plan.subjects[p];
  }
  plan.assignment = std::move(assignment);
  return plan;
}

inline std::size_t count_subjects(std::span<const std::uint64_t> degree) {
  return static_cast<std::size_t>(std::count_if(degree.begin(), degree.end(), [](auto d) { return d > 0; }));
}

// Greedy longest-processing-time: subjects by out-degree descending (ties by
// ascending id), each to the currently least-loaded partition (ties to the
// lowest index). O(|E| log |E| + |T|).
inline PartitionPlan partition_degree_aware(std::span<const Triple> triples, std::uint64_t num_entities,
                                            std::size_t m) {
  if (m == 0) throw InvalidArgument("partition count m must be >= 1");
  const auto degree = out_degrees(triples, num_entities);
  std::vector<std::uint32_t> order;
  for (std::uint64_t e = 0; e < num_entities; ++e) {
    if (degree[e] > 0) order.push_back(static_cast<std::uint32_t>(e));
  }
  if (m > order.size()) {
    throw InvalidArgument("m = " + std::to_string(m) + " exceeds the " + std::to_string(order.size()) +
                          " distinct subjects");
  }
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return degree[a] != degree[b] ? degree[a] > degree[b] : a < b;
  });

  using Slot = std::pair<std::uint64_t, std::uint32_t>;  // (load, partition)
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> heap;
  for (std::uint32_t p = 0; p < m; ++p) heap.emplace(0, p);

  std::vector<std::uint32_t> assignment(num_entities, kNoPartition);
  for (auto e : order) {
    auto [load, p] = heap.top();
    heap.pop();
    assignment[e] = p;
    heap.emplace(load + degree[e], p);
  }
  return plan_from_assignment(triples, num_entities, m, std::move(assignment));
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

// Degree-oblivious baseline: partition = splitmix64(id) mod m. Partitions may
// end up empty.
inline PartitionPlan partition_hash(std::span<const Triple> triples, std::uint64_t num_entities, std::size_t m) {
  if (m == 0) throw InvalidArgument("partition count m must be >= 1");
  const auto degree = out_degrees(triples, num_entities);
  if (m > count_subjects(degree)) {
    throw InvalidArgument("m = " + std::to_string(m) + " exceeds the number of distinct subjects");
  }
  std::vector<std::uint32_t> assignment(num_entities, kNoPartition);
  for (std::uint64_t e = 0; e < num_entities; ++e) {
    if (degree[e] > 0) assignment[e] = static_cast<std::uint32_t>(detail::mix64(e) % m);
  }
  return plan_from_assignment(triples, num_entities, m, std::move(assignment));
}

inline PartitionPlan make_plan(PartitionStrategy strategy, std::span<const Triple> triples,
                               std::uint64_t num_entities, std::size_t m) {
  return strategy == PartitionStrategy::lpt ? partition_degree_aware(triples, num_entities, m)
                                            : partition_hash(triples, num_entities, m);
}

// One shard. Local entity ids are the partition's subjects in ascending
// global order, followed by the remaining object entities in ascending global
// order. Relation ids stay global. Local triple order follows global order.
struct Subgraph {
  std::size_t index = 0;
  IncidenceGraph graph;
  std::vector<EntityId> entity_to_global;
  std::vector<TripleId> triple_to_global;
  std::size_t num_subjects = 0;

  // Local id of a subject owned by this partition.
  std::optional<EntityId> local_subject(EntityId global) const {
    const auto begin = entity_to_global.begin();
    const auto end = begin + static_cast<std::ptrdiff_t>(num_subjects);
    auto it = std::lower_bound(begin, end, global);
    if (it == end || *it != global) return std::nullopt;
    return EntityId{static_cast<std::uint32_t>(it - begin)};
  }

  EntityId to_global(EntityId local) const { return entity_to_global[local.value]; }
  TripleId to_global(TripleId local) const { return triple_to_global[local.value]; }

  friend bool operator==(const Subgraph&, const Subgraph&) = default;
};

inline Subgraph make_subgraph(std::size_t index, std::span<const Triple> triples, std::span<const TripleId> members,
                              const PartitionPlan& plan, std::uint64_t num_relations) {
  Subgraph sg;
  sg.index = index;
  sg.triple_to_global.assign(members.begin(), members.end());

  std::vector<EntityId> subjects;
  std::vector<EntityId> objects;
  for (auto t : members) {
    subjects.push_back(triples[t.value].subject);
    objects.push_back(triples[t.value].object);
  }
  auto sort_unique = [](std::vector<EntityId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  sort_unique(subjects);
  sort_unique(objects);
  std::vector<EntityId> object_only;
  std::set_difference(objects.begin(), objects.end(), subjects.begin(), subjects.end(),
                      std::back_inserter(object_only));
  for (auto s : subjects) {
    if (plan.partition_of(s) != index) throw IntegrityError("subject routed to the wrong partition");
  }

  sg.num_subjects = subjects.size();
  sg.entity_to_global = std::move(subjects);
  sg.entity_to_global.insert(sg.entity_to_global.end(), object_only.begin(), object_only.end());

  std::unordered_map<EntityId, EntityId> to_local;
  to_local.reserve(sg.entity_to_global.size());
  for (std::uint32_t i = 0; i < sg.entity_to_global.size(); ++i) to_local.emplace(sg.entity_to_global[i], EntityId{i});

  std::vector<Triple> local;
  local.reserve(members.size());
  for (auto t : members) {
    const auto& tr = triples[t.value];
    local.push_back({to_local.at(tr.subject), tr.relation, to_local.at(tr.object)});
  }
  sg.graph = build_incidence(local, {sg.entity_to_global.size(), num_relations, local.size()});
  return sg;
}

// Splits the triples according to `plan`. Every triple lands in exactly one
// subgraph.
inline std::vector<Subgraph> materialize_subgraphs(const PartitionPlan& plan, std::span<const Triple> triples,
                                                   std::uint64_t num_relations) {
  std::vector<std::vector<TripleId>> members(plan.m);
  for (std::uint32_t t = 0; t < triples.size(); ++t) {
    const auto p = plan.partition_of(triples[t].subject);
    if (p == kNoPartition || p >= plan.m) {
      throw IntegrityError("plan does not cover subject of triple " + std::to_string(t));
    }
    members[p].push_back(TripleId{t});
  }
  std::vector<Subgraph> out;
  out.reserve(plan.m);
  for (std::size_t p = 0; p < plan.m; ++p) out.push_back(make_subgraph(p, triples, members[p], plan, num_relations));
  return out;
}

struct Routing {
  std::map<std::size_t, EntityVector> buckets;  // only non-empty buckets
  EntityVector sink;                            // active entities with no outgoing triples
};

inline Routing route(const EntityVector& q, const PartitionPlan& plan) {
  std::map<std::size_t, std::vector<EntityId>> grouped;
  std::vector<EntityId> sink;
  for (auto e : q) {
    const auto p = plan.partition_of(e);
    if (p == kNoPartition) {
      sink.push_back(e);
    } else {
      grouped[p].push_back(e);
    }
  }
  Routing r;
  for (auto& [p, ids] : grouped) r.buckets.emplace(p, EntityVector::from_sorted_unique(std::move(ids)));
  r.sink = EntityVector::from_sorted_unique(std::move(sink));
  return r;
}

}  // namespace kghop

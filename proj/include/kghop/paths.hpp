#pragma once
// Path reconstruction from per-hop activated triples.
//
// For hop h the activated set T_h holds the triples leaving the hop h-1
// frontier. A path picks one triple per hop such that the object of step h
// is the subject of step h+1. Paths are emitted in lexicographic order of
// their TripleId sequences.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "kghop/incidence.hpp"

namespace kghop {

struct PathStep {
  TripleId triple;
  EntityId subject;
  RelationId relation;
  EntityId object;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct Path {
  std::vector<PathStep> steps;

  EntityId source() const { return steps.front().subject; }
  EntityId target() const { return steps.back().object; }
  friend bool operator==(const Path&, const Path&) = default;
};

struct PathSet {
  std::vector<Path> paths;
  bool truncated = false;  // more complete paths existed beyond the cap
};

inline constexpr std::size_t kDefaultMaxPaths = 10'000;
inline constexpr std::size_t kUnlimitedPaths = std::numeric_limits<std::size_t>::max();

// `hops[h-1]` lists the triples activated at hop h, in any order.
// Dead-end prefixes are pruned up front, so enumeration cost is proportional
// to the number of paths produced.
inline PathSet assemble_paths(const EntityVector& q0, std::vector<std::vector<PathStep>> hops,
                              std::size_t max_paths) {
  PathSet result;
  const std::size_t k = hops.size();
  if (k == 0 || q0.empty()) return result;

  auto by_subject = [](const PathStep& a, const PathStep& b) {
    return a.subject < b.subject || (a.subject == b.subject && a.triple < b.triple);
  };
  for (auto& edges : hops) std::sort(edges.begin(), edges.end(), by_subject);

  // alive[h]: entities that can take step h+1 and still complete the path.
  std::vector<EntityVector> alive(k);
  for (std::size_t h = k; h-- > 0;) {
    std::vector<EntityId> ids;
    for (const auto& edge : hops[h]) {
      if (h + 1 == k || alive[h + 1].contains(edge.object)) ids.push_back(edge.subject);
    }
    alive[h] = EntityVector::from_unsorted(std::move(ids));
  }

  auto extendable = [&](std::size_t h, const PathStep& edge) {
    return h + 1 == k || alive[h + 1].contains(edge.object);
  };

  std::vector<PathStep> first;
  for (const auto& edge : hops[0]) {
    if (q0.contains(edge.subject) && extendable(0, edge)) first.push_back(edge);
  }
  std::sort(first.begin(), first.end(), [](const PathStep& a, const PathStep& b) { return a.triple < b.triple; });

  std::vector<PathStep> prefix;
  prefix.reserve(k);
  bool stop = false;

  auto descend = [&](auto&& self, std::size_t h) -> void {
    if (stop) return;
    if (h == k) {
      if (result.paths.size() == max_paths) {
        result.truncated = true;
        stop = true;
        return;
      }
      result.paths.push_back(Path{prefix});
      return;
    }
    const EntityId from = prefix.back().object;
    const auto& edges = hops[h];
    auto lo = std::lower_bound(edges.begin(), edges.end(), from,
                               [](const PathStep& e, EntityId s) { return e.subject < s; });
    for (auto it = lo; it != edges.end() && it->subject == from && !stop; ++it) {
      if (!extendable(h, *it)) continue;
      prefix.push_back(*it);
      self(self, h + 1);
      prefix.pop_back();
    }
  };

  for (const auto& edge : first) {
    if (stop) break;
    prefix.push_back(edge);
    descend(descend, 1);
    prefix.pop_back();
  }
  return result;
}

// Triples leaving `source`, i.e. the support of source * SUB, with their
// subject, relation and object recovered from the SUB row, REL and OBJ.
inline std::vector<PathStep> expand_steps(const EntityVector& source, const IncidenceGraph& g) {
  std::vector<PathStep> steps;
  for (auto e : source) {
    for (auto t : g.sub_row(e)) steps.push_back({t, e, g.relation_of(t), g.object_of(t)});
  }
  return steps;
}

// All length-k walks from q0, capped at max_paths.
inline PathSet reconstruct_paths(const EntityVector& q0, std::size_t k, const IncidenceGraph& g,
                                 std::size_t max_paths = kDefaultMaxPaths) {
  const HopTrace trace = k_hop(q0, k, g, HopSemantics::exact_walk);
  std::vector<std::vector<PathStep>> hops;
  hops.reserve(k);
  hops.push_back(expand_steps(q0, g));
  for (std::size_t h = 1; h < k; ++h) hops.push_back(expand_steps(trace.hops[h - 1].frontier, g));
  return assemble_paths(q0, std::move(hops), max_paths);
}

}  // namespace kghop

#pragma once
// Incidence decomposition of a triple table and single-graph k-hop retrieval.
//
// SUB (entity x triple) is stored as CSR: row i lists the triples whose
// subject is entity i, in increasing TripleId order. OBJ and REL have exactly
// one nonzero per triple row, so they are flat per-triple arrays and the
// product t * OBJ is a gather.

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kghop/error.hpp"
#include "kghop/ids.hpp"
#include "kghop/vector.hpp"

namespace kghop {

class IncidenceGraph {
 public:
  IncidenceGraph() = default;

  // Validates every structural invariant; used by build and by loaders.
  static IncidenceGraph from_parts(GraphCounts counts,
                                   std::vector<std::uint64_t> row_offsets,
                                   std::vector<TripleId> columns,
                                   std::vector<EntityId> objects,
                                   std::vector<RelationId> relations) {
    if (counts.entities > kMaxIdSpace || counts.relations > kMaxIdSpace || counts.triples > kMaxIdSpace) {
      throw InvalidArgument("graph counts exceed the 32-bit in-memory id space");
    }
    if (row_offsets.size() != counts.entities + 1) throw InvalidArgument("row offsets must have |E|+1 entries");
    if (row_offsets.front() != 0) throw InvalidArgument("row offsets must start at 0");
    if (row_offsets.back() != counts.triples) throw InvalidArgument("row offsets must end at |T|");
    if (columns.size() != counts.triples) throw InvalidArgument("SUB must have |T| nonzeros");
    if (objects.size() != counts.triples) throw InvalidArgument("OBJ must have |T| entries");
    if (relations.size() != counts.triples) throw InvalidArgument("REL must have |T| entries");

    std::vector<bool> covered(counts.triples, false);
    for (std::uint64_t e = 0; e < counts.entities; ++e) {
      const auto lo = row_offsets[e];
      const auto hi = row_offsets[e + 1];
      if (hi < lo) throw InvalidArgument("row offsets decrease at entity " + std::to_string(e));
      for (auto i = lo; i < hi; ++i) {
        const auto t = columns[i].value;
        if (t >= counts.triples) throw InvalidArgument("triple id " + std::to_string(t) + " out of range");
        if (i > lo && !(columns[i - 1] < columns[i])) {
          throw InvalidArgument("SUB row " + std::to_string(e) + " is not strictly sorted");
        }
        if (covered[t]) throw InvalidArgument("triple " + std::to_string(t) + " has more than one subject");
        covered[t] = true;
      }
    }
    for (std::uint64_t t = 0; t < counts.triples; ++t) {
      if (objects[t].value >= counts.entities) throw InvalidArgument("object id out of range at triple " + std::to_string(t));
      if (relations[t].value >= counts.relations) throw InvalidArgument("relation id out of range at triple " + std::to_string(t));
    }

    IncidenceGraph g;
    g.counts_ = counts;
    g.offsets_ = std::move(row_offsets);
    g.columns_ = std::move(columns);
    g.objects_ = std::move(objects);
    g.relations_ = std::move(relations);
    return g;
  }

  const GraphCounts& counts() const noexcept { return counts_; }
  std::uint64_t num_entities() const noexcept { return counts_.entities; }
  std::uint64_t num_relations() const noexcept { return counts_.relations; }
  std::uint64_t num_triples() const noexcept { return counts_.triples; }

  std::span<const TripleId> sub_row(EntityId e) const {
    return std::span<const TripleId>(columns_).subspan(offsets_[e.value], offsets_[e.value + 1] - offsets_[e.value]);
  }
  std::uint64_t out_degree(EntityId e) const { return offsets_[e.value + 1] - offsets_[e.value]; }

  EntityId object_of(TripleId t) const { return objects_[t.value]; }
  RelationId relation_of(TripleId t) const { return relations_[t.value]; }

  // All triples, indexed by TripleId.
  std::vector<Triple> triples() const {
    std::vector<Triple> out(counts_.triples);
    for (std::uint64_t e = 0; e < counts_.entities; ++e) {
      for (auto i = offsets_[e]; i < offsets_[e + 1]; ++i) {
        const auto t = columns_[i].value;
        out[t] = Triple{EntityId{static_cast<std::uint32_t>(e)}, relations_[t], objects_[t]};
      }
    }
    return out;
  }

  std::span<const std::uint64_t> row_offsets() const noexcept { return offsets_; }
  std::span<const TripleId> columns() const noexcept { return columns_; }
  std::span<const EntityId> objects() const noexcept { return objects_; }
  std::span<const RelationId> relations() const noexcept { return relations_; }

  friend bool operator==(const IncidenceGraph&, const IncidenceGraph&) = default;

 private:
  GraphCounts counts_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<TripleId> columns_;
  std::vector<EntityId> objects_;
  std::vector<RelationId> relations_;
};

// `triples[t]` becomes TripleId t. Counting pass over subjects, then one fill
// pass; rows come out sorted because triples are visited in id order.
inline IncidenceGraph build_incidence(std::span<const Triple> triples, GraphCounts counts) {
  if (counts.triples != triples.size()) throw InvalidArgument("|T| does not match the triple list");
  if (counts.entities > kMaxIdSpace || counts.triples > kMaxIdSpace) {
    throw InvalidArgument("graph counts exceed the 32-bit in-memory id space");
  }
  std::vector<std::uint64_t> offsets(counts.entities + 1, 0);
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& tr = triples[t];
    if (tr.subject.value >= counts.entities || tr.object.value >= counts.entities) {
      throw InvalidArgument("entity id out of range in triple " + std::to_string(t));
    }
    if (tr.relation.value >= counts.relations) {
      throw InvalidArgument("relation id out of range in triple " + std::to_string(t));
    }
    ++offsets[tr.subject.value + 1];
  }
  for (std::size_t e = 0; e < counts.entities; ++e) offsets[e + 1] += offsets[e];

  std::vector<TripleId> columns(triples.size());
  std::vector<EntityId> objects(triples.size());
  std::vector<RelationId> relations(triples.size());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& tr = triples[t];
    columns[cursor[tr.subject.value]++] = TripleId{static_cast<std::uint32_t>(t)};
    objects[t] = tr.object;
    relations[t] = tr.relation;
  }
  return IncidenceGraph::from_parts(counts, std::move(offsets), std::move(columns), std::move(objects),
                                    std::move(relations));
}

struct OneHop {
  TripleVector activated;  // q * SUB
  EntityVector next;       // (q * SUB) * OBJ
};

inline OneHop one_hop(const EntityVector& q, const IncidenceGraph& g) {
  if (q.extent() > g.num_entities()) throw InvalidArgument("query entity id out of range");
  IdAccumulator<TripleTag> triples(g.num_triples());
  IdAccumulator<EntityTag> entities(g.num_entities());
  for (auto e : q) {
    for (auto t : g.sub_row(e)) {
      triples.push(t);
      entities.push(g.object_of(t));
    }
  }
  // Each triple has one subject, so rows never overlap and `triples` only
  // needs sorting, not deduplication.
  return {std::move(triples).finish(), std::move(entities).finish()};
}

enum class HopSemantics {
  exact_walk,  // q(h) = q(0) (SUB OBJ)^h : endpoints of walks of length exactly h
  frontier,    // entities at shortest-path distance exactly h (BFS layers)
  cumulative,  // entities at distance 1..h
};

inline std::string_view to_string(HopSemantics s) {
  switch (s) {
    case HopSemantics::exact_walk: return "exact";
    case HopSemantics::frontier: return "frontier";
    case HopSemantics::cumulative: return "cumulative";
  }
  return "?";
}

inline HopSemantics parse_semantics(std::string_view name) {
  if (name == "exact" || name == "exact-walk" || name == "exact_walk") return HopSemantics::exact_walk;
  if (name == "frontier") return HopSemantics::frontier;
  if (name == "cumulative") return HopSemantics::cumulative;
  throw InvalidArgument("unknown hop semantics '" + std::string(name) + "'");
}

inline constexpr HopSemantics kAllSemantics[] = {HopSemantics::exact_walk, HopSemantics::frontier,
                                                 HopSemantics::cumulative};

struct Hop {
  EntityVector frontier;
  TripleVector activated;  // triples activated while expanding into this hop

  friend bool operator==(const Hop&, const Hop&) = default;
};

// hops[h-1] describes hop h.
struct HopTrace {
  std::vector<Hop> hops;

  const EntityVector& final_frontier() const { return hops.back().frontier; }
  friend bool operator==(const HopTrace&, const HopTrace&) = default;
};

class Deadline {
 public:
  using clock = std::chrono::steady_clock;

  explicit Deadline(clock::time_point at) : at_(at) {}
  static Deadline after(std::chrono::milliseconds budget) { return Deadline(clock::now() + budget); }

  bool expired() const { return clock::now() >= at_; }

 private:
  clock::time_point at_;
};

// Drives k expansions under the requested semantics. `expand` maps an entity
// vector to its OneHop image; callers supply single-graph or cross-graph
// expansion. In frontier and cumulative modes only the newly discovered
// layer is expanded.
template <typename Expand>
HopTrace run_hops(const EntityVector& q0, std::size_t k, HopSemantics semantics, Expand&& expand,
                  const Deadline* deadline = nullptr) {
  if (k == 0) throw InvalidArgument("k-hop retrieval requires k >= 1");
  HopTrace trace;
  trace.hops.reserve(k);
  EntityVector source = q0;
  EntityVector seen = q0;
  EntityVector reached;
  for (std::size_t h = 1; h <= k; ++h) {
    if (deadline != nullptr && deadline->expired()) {
      throw QueryTimeout("deadline passed before hop " + std::to_string(h));
    }
    OneHop step = expand(source);
    Hop hop;
    hop.activated = std::move(step.activated);
    switch (semantics) {
      case HopSemantics::exact_walk:
        source = std::move(step.next);
        hop.frontier = source;
        break;
      case HopSemantics::frontier:
        source = set_difference(step.next, seen);
        seen = set_union(seen, source);
        hop.frontier = source;
        break;
      case HopSemantics::cumulative:
        source = set_difference(step.next, seen);
        seen = set_union(seen, source);
        reached = set_union(reached, source);
        hop.frontier = reached;
        break;
    }
    trace.hops.push_back(std::move(hop));
  }
  return trace;
}

inline HopTrace k_hop(const EntityVector& q0, std::size_t k, const IncidenceGraph& g,
                      HopSemantics semantics = HopSemantics::frontier, const Deadline* deadline = nullptr) {
  return run_hops(q0, k, semantics, [&g](const EntityVector& q) { return one_hop(q, g); }, deadline);
}

}  // namespace kghop

#pragma once
// Seeded synthetic graphs and workloads.
//
// All randomness comes from std::mt19937_64 (its output sequence is fixed by
// the standard) through the draw helpers below, which avoid the
// implementation-defined std distributions. Same seed, same graph, on every
// platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <unordered_set>
#include <vector>

#include "kghop/error.hpp"
#include "kghop/ids.hpp"
#include "kghop/vector.hpp"

namespace kghop {

using Rng = std::mt19937_64;

// Uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_below needs a positive bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline std::uint64_t uniform_between(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + uniform_below(rng, hi - lo + 1);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct SyntheticGraph {
  GraphCounts counts;
  std::vector<Triple> triples;
};

namespace detail {

inline SyntheticGraph collect(std::uint64_t entities, std::uint64_t relations, std::uint64_t edges, Rng& rng,
                              auto&& draw_subject, auto&& draw_object) {
  std::unordered_set<Triple> seen;
  std::vector<Triple> triples;
  triples.reserve(edges);
  const std::uint64_t max_attempts = edges * 50 + 1000;
  for (std::uint64_t attempt = 0; triples.size() < edges && attempt < max_attempts; ++attempt) {
    Triple t{EntityId{static_cast<std::uint32_t>(draw_subject())},
             RelationId{static_cast<std::uint32_t>(uniform_below(rng, relations))},
             EntityId{static_cast<std::uint32_t>(draw_object())}};
    if (seen.insert(t).second) triples.push_back(t);
  }
  return {{entities, relations, triples.size()}, std::move(triples)};
}

}  // namespace detail

// Directed G(n, M): M distinct triples with uniform endpoints and relations.
inline SyntheticGraph erdos_renyi(std::uint64_t entities, std::uint64_t edges, std::uint64_t relations,
                                  std::uint64_t seed) {
  if (entities == 0 || relations == 0) throw InvalidArgument("graph needs entities and relations");
  Rng rng(seed);
  auto draw = [&] { return uniform_below(rng, entities); };
  return detail::collect(entities, relations, edges, rng, draw, draw);
}

// Zipf-weighted endpoints, P(entity i) proportional to (i+1)^-exponent, with
// subject and object ranks drawn from independent permutations. Produces the
// heavy-tailed hub structure typical of real KGs.
inline SyntheticGraph power_law(std::uint64_t entities, std::uint64_t edges, std::uint64_t relations,
                                double exponent, std::uint64_t seed) {
  if (entities == 0 || relations == 0) throw InvalidArgument("graph needs entities and relations");
  Rng rng(seed);
  std::vector<double> cdf(entities);
  double total = 0.0;
  for (std::uint64_t i = 0; i < entities; ++i) {
    total += std::pow(static_cast<double>(i + 1), -exponent);
    cdf[i] = total;
  }
  auto shuffled = [&] {
    std::vector<std::uint32_t> perm(entities);
    for (std::uint32_t i = 0; i < entities; ++i) perm[i] = i;
    for (std::uint64_t i = entities; i > 1; --i) std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
    return perm;
  };
  const auto subject_rank = shuffled();
  const auto object_rank = shuffled();
  auto draw_rank = [&] {
    const double u = uniform_unit(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(entities) - 1));
  };
  return detail::collect(
      entities, relations, edges, rng, [&] { return subject_rank[draw_rank()]; },
      [&] { return object_rank[draw_rank()]; });
}

// Every entity gets `out_degree` distinct uniformly random successors. A
// random out-regular digraph, which is an expander with high probability.
inline SyntheticGraph random_regular(std::uint64_t entities, std::uint64_t out_degree, std::uint64_t relations,
                                     std::uint64_t seed) {
  if (out_degree >= entities) throw InvalidArgument("out degree must be below the entity count");
  Rng rng(seed);
  std::vector<Triple> triples;
  triples.reserve(entities * out_degree);
  for (std::uint32_t s = 0; s < entities; ++s) {
    std::vector<std::uint32_t> picked;
    while (picked.size() < out_degree) {
      const auto o = static_cast<std::uint32_t>(uniform_below(rng, entities));
      if (std::find(picked.begin(), picked.end(), o) == picked.end()) picked.push_back(o);
    }
    for (auto o : picked) {
      triples.push_back({EntityId{s}, RelationId{static_cast<std::uint32_t>(uniform_below(rng, relations))}, EntityId{o}});
    }
  }
  return {{entities, relations, triples.size()}, std::move(triples)};
}

// Distinct seed entities drawn from `pool` (or from all entities when empty).
inline EntityVector random_query(Rng& rng, std::uint64_t num_entities, std::size_t count,
                                 std::span<const EntityId> pool = {}) {
  const std::uint64_t universe = pool.empty() ? num_entities : pool.size();
  count = static_cast<std::size_t>(std::min<std::uint64_t>(count, universe));
  std::unordered_set<std::uint64_t> chosen;
  std::vector<EntityId> ids;
  while (ids.size() < count) {
    const auto i = uniform_below(rng, universe);
    if (!chosen.insert(i).second) continue;
    ids.push_back(pool.empty() ? EntityId{static_cast<std::uint32_t>(i)} : pool[i]);
  }
  return EntityVector::from_unsorted(std::move(ids));
}

}  // namespace kghop

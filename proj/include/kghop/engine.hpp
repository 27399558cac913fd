#pragma once
// Cross-partition k-hop retrieval with on-demand subgraph loading.
//
// Each hop routes the active entities to their owning partitions, fetches
// those partitions through the LRU cache, expands locally, maps results back
// to global ids and unions them into the next frontier. Partitions that
// receive no active entities in a hop are never touched.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kghop/cache.hpp"
#include "kghop/incidence.hpp"
#include "kghop/partition.hpp"
#include "kghop/paths.hpp"

namespace kghop {

class SubgraphStore {
 public:
  virtual ~SubgraphStore() = default;
  virtual std::size_t partition_count() const = 0;
  // Throws IntegrityError (or a FormatError for damaged files) when the
  // partition cannot be produced.
  virtual std::shared_ptr<const Subgraph> load(std::size_t index) const = 0;
};

class MemorySubgraphStore final : public SubgraphStore {
 public:
  explicit MemorySubgraphStore(std::vector<Subgraph> subgraphs) {
    shards_.reserve(subgraphs.size());
    for (auto& sg : subgraphs) shards_.push_back(std::make_shared<const Subgraph>(std::move(sg)));
  }

  std::size_t partition_count() const override { return shards_.size(); }

  std::shared_ptr<const Subgraph> load(std::size_t index) const override {
    if (index >= shards_.size()) throw IntegrityError("partition " + std::to_string(index) + " is not in the store");
    return shards_[index];
  }

 private:
  std::vector<std::shared_ptr<const Subgraph>> shards_;
};

// Reassembles the global triple table (indexed by TripleId) by reading every
// partition straight from the store, bypassing any cache.
inline std::vector<Triple> gather_triples(const SubgraphStore& store, std::uint64_t num_triples) {
  std::vector<Triple> out(num_triples);
  std::vector<bool> filled(num_triples, false);
  for (std::size_t p = 0; p < store.partition_count(); ++p) {
    const auto sg = store.load(p);
    const auto local = sg->graph.triples();
    for (std::uint32_t t = 0; t < local.size(); ++t) {
      const auto global = sg->triple_to_global[t].value;
      if (global >= num_triples || filled[global]) throw IntegrityError("partitions do not tile the triple table");
      filled[global] = true;
      out[global] = {sg->entity_to_global[local[t].subject.value], local[t].relation,
                     sg->entity_to_global[local[t].object.value]};
    }
  }
  for (bool f : filled) {
    if (!f) throw IntegrityError("partitions do not cover the triple table");
  }
  return out;
}

using SubgraphCache = LruCache<std::size_t, std::shared_ptr<const Subgraph>>;

class PartitionedGraph {
 public:
  PartitionedGraph(PartitionPlan plan, std::shared_ptr<const SubgraphStore> store, std::size_t cache_capacity)
      : plan_(std::move(plan)), store_(std::move(store)), cache_(cache_capacity) {
    if (!store_) throw IntegrityError("partitioned graph needs a subgraph store");
    if (store_->partition_count() != plan_.m) {
      throw IntegrityError("plan has " + std::to_string(plan_.m) + " partitions but the store has " +
                           std::to_string(store_->partition_count()));
    }
    num_triples_ = std::accumulate(plan_.loads.begin(), plan_.loads.end(), std::uint64_t{0});
  }

  const PartitionPlan& plan() const noexcept { return plan_; }
  std::uint64_t num_entities() const noexcept { return plan_.assignment.size(); }
  std::uint64_t num_triples() const noexcept { return num_triples_; }
  SubgraphCache& cache() noexcept { return cache_; }
  const SubgraphCache& cache() const noexcept { return cache_; }

  std::shared_ptr<const Subgraph> fetch(std::size_t index) {
    return cache_.get(index, [this](std::size_t i) {
      auto sg = store_->load(i);
      if (!sg) throw IntegrityError("partition " + std::to_string(i) + " is missing from the store");
      if (sg->index != i) {
        throw IntegrityError("store returned partition " + std::to_string(sg->index) + " for partition " +
                             std::to_string(i));
      }
      return sg;
    });
  }

 private:
  PartitionPlan plan_;
  std::shared_ptr<const SubgraphStore> store_;
  SubgraphCache cache_;
  std::uint64_t num_triples_ = 0;
};

namespace detail {

// One cross-graph expansion. When `steps` is non-null the activated triples
// are also recorded with global ids for path assembly.
inline OneHop cross_expand(const EntityVector& q, PartitionedGraph& pg, std::vector<PathStep>* steps) {
  if (q.extent() > pg.num_entities()) throw InvalidArgument("query entity id out of range");
  const Routing routing = route(q, pg.plan());
  IdAccumulator<TripleTag> triples(pg.num_triples());
  IdAccumulator<EntityTag> entities(pg.num_entities());
  for (const auto& [index, bucket] : routing.buckets) {
    const auto sg = pg.fetch(index);
    std::vector<EntityId> local;
    local.reserve(bucket.size());
    for (auto e : bucket) {
      auto id = sg->local_subject(e);
      if (!id) {
        throw IntegrityError("partition " + std::to_string(index) + " does not hold subject " +
                             std::to_string(e.value));
      }
      local.push_back(*id);
    }
    // Local subject ids preserve global order, so this stays canonical.
    const auto local_q = EntityVector::from_sorted_unique(std::move(local));
    const OneHop step = one_hop(local_q, sg->graph);
    for (auto t : step.activated) triples.push(sg->to_global(t));
    if (steps != nullptr) {
      for (auto e : local_q) {
        for (auto t : sg->graph.sub_row(e)) {
          steps->push_back({sg->to_global(t), sg->to_global(e), sg->graph.relation_of(t),
                            sg->to_global(sg->graph.object_of(t))});
        }
      }
    }
    for (auto e : step.next) entities.push(sg->to_global(e));
  }
  return {std::move(triples).finish(), std::move(entities).finish()};
}

}  // namespace detail

inline HopTrace cross_graph_k_hop(const EntityVector& q0, std::size_t k, PartitionedGraph& pg,
                                  HopSemantics semantics = HopSemantics::frontier,
                                  const Deadline* deadline = nullptr) {
  return run_hops(
      q0, k, semantics, [&pg](const EntityVector& q) { return detail::cross_expand(q, pg, nullptr); }, deadline);
}

inline PathSet cross_graph_paths(const EntityVector& q0, std::size_t k, PartitionedGraph& pg,
                                 std::size_t max_paths = kDefaultMaxPaths) {
  std::vector<std::vector<PathStep>> hops;
  hops.reserve(k);
  run_hops(q0, k, HopSemantics::exact_walk, [&](const EntityVector& q) {
    hops.emplace_back();
    return detail::cross_expand(q, pg, &hops.back());
  });
  return assemble_paths(q0, std::move(hops), max_paths);
}

struct BatchQuery {
  std::uint64_t id = 0;
  EntityVector q0;
  std::size_t k = 1;
};

// execution[i] is the input position run i-th; restore[j] is the run slot of
// input query j, so execution[restore[j]] == j.
struct QueryBatch {
  std::vector<BatchQuery> queries;
  std::vector<std::size_t> execution;
  std::vector<std::size_t> restore;
};

inline QueryBatch make_batch(std::vector<BatchQuery> queries, std::vector<std::size_t> execution) {
  if (execution.size() != queries.size()) throw InvalidArgument("execution order must cover every query");
  QueryBatch batch;
  batch.restore.assign(queries.size(), queries.size());
  for (std::size_t slot = 0; slot < execution.size(); ++slot) {
    const auto j = execution[slot];
    if (j >= queries.size() || batch.restore[j] != queries.size()) {
      throw InvalidArgument("execution order is not a permutation");
    }
    batch.restore[j] = slot;
  }
  batch.queries = std::move(queries);
  batch.execution = std::move(execution);
  return batch;
}

// Sorted partition indices that the query's seeds route to.
inline std::vector<std::size_t> partition_signature(const EntityVector& q0, const PartitionPlan& plan) {
  std::vector<std::size_t> sig;
  for (const auto& [index, bucket] : route(q0, plan).buckets) sig.push_back(index);
  return sig;
}

// Groups queries by hop-0 signature so queries needing the same partitions
// run back to back. Groups are ordered by signature; order inside a group is
// the input order.
inline QueryBatch plan_batch(std::vector<BatchQuery> queries, const PartitionPlan& plan) {
  std::vector<std::vector<std::size_t>> signatures;
  signatures.reserve(queries.size());
  for (const auto& q : queries) signatures.push_back(partition_signature(q.q0, plan));
  std::vector<std::size_t> order(queries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return signatures[a] < signatures[b]; });
  return make_batch(std::move(queries), std::move(order));
}

struct BatchResult {
  std::uint64_t id = 0;
  std::optional<HopTrace> trace;
  std::string error;  // set when trace is empty
};

// Runs in execution order and returns results in input order. A failing
// query records its error and the batch continues.
inline std::vector<BatchResult> run_batch(const QueryBatch& batch, PartitionedGraph& pg,
                                          HopSemantics semantics = HopSemantics::frontier) {
  std::vector<BatchResult> results(batch.queries.size());
  for (auto j : batch.execution) {
    const auto& q = batch.queries[j];
    results[j].id = q.id;
    try {
      results[j].trace = cross_graph_k_hop(q.q0, q.k, pg, semantics);
    } catch (const std::exception& e) {
      results[j].error = e.what();
    }
  }
  return results;
}

}  // namespace kghop

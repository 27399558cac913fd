#include <gtest/gtest.h>

#include "test_support.hpp"

namespace kghop {
namespace {

using namespace testing;

SyntheticGraph tiny_synthetic() {
  const auto t = tiny_table();
  return {t.counts(), t.triples};
}

std::vector<EntityVector> frontiers(const HopTrace& trace) {
  std::vector<EntityVector> out;
  for (const auto& h : trace.hops) out.push_back(h.frontier);
  return out;
}

TEST(CrossGraph, TinyGraphMatchesSingleGraph) {
  const auto sg = tiny_synthetic();
  auto pg = in_memory_partitioned(sg, 2, 2);
  const auto trace = cross_graph_k_hop(EntityVector{A}, 2, pg, HopSemantics::exact_walk);
  ASSERT_EQ(trace.hops.size(), 2u);
  EXPECT_EQ(trace.hops[0].frontier, (EntityVector{B, C}));
  EXPECT_EQ(trace.hops[1].frontier, (EntityVector{A, C}));
  const auto single = k_hop(EntityVector{A}, 2, tiny_graph(), HopSemantics::exact_walk);
  EXPECT_EQ(frontiers(trace), frontiers(single));
}

TEST(CrossGraph, ObjectOnlySeedsGoNowhere) {
  const SyntheticGraph g{{3, 1, 1}, {{EntityId{0}, RelationId{0}, EntityId{1}}}};
  auto pg = in_memory_partitioned(g, 1, 1);
  for (auto sem : kAllSemantics) {
    const auto trace = cross_graph_k_hop(EntityVector{1, 2}, 3, pg, sem);
    for (const auto& h : trace.hops) EXPECT_TRUE(h.frontier.empty());
  }
  EXPECT_EQ(pg.cache().snapshot_counters().loads, 0u);
}

TEST(CrossGraph, RejectsBadArguments) {
  auto pg = in_memory_partitioned(tiny_synthetic(), 2, 2);
  EXPECT_THROW(cross_graph_k_hop(EntityVector{A}, 0, pg), InvalidArgument);
  EXPECT_THROW(cross_graph_k_hop(EntityVector{7}, 1, pg), InvalidArgument);
}

TEST(CrossGraph, PathsMatchSingleGraph) {
  auto pg = in_memory_partitioned(tiny_synthetic(), 2, 2);
  const auto paths = cross_graph_paths(EntityVector{A}, 2, pg);
  const auto single = reconstruct_paths(EntityVector{A}, 2, tiny_graph());
  ASSERT_EQ(paths.paths.size(), 2u);
  EXPECT_EQ(paths.paths, single.paths);
  EXPECT_FALSE(paths.truncated);

  EXPECT_TRUE(cross_graph_paths(EntityVector{}, 2, pg).paths.empty());
  const auto capped = cross_graph_paths(EntityVector{A}, 2, pg, 0);
  EXPECT_TRUE(capped.paths.empty());
  EXPECT_TRUE(capped.truncated);
}

TEST(CrossGraphProperty, TransparencyAcrossPartitionCountsAndSemantics) {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const auto g = random_graph(seed, 40 + uniform_below(rng, 400), 100 + uniform_below(rng, 2000));
    const auto single = build_incidence(g.triples, g.counts);
    const auto subjects = distinct_subjects(g.triples);
    for (std::size_t m : {1, 2, 4, 8}) {
      if (m > subjects) continue;
      for (auto strategy : {PartitionStrategy::lpt, PartitionStrategy::hash}) {
        auto pg = in_memory_partitioned(g, m, 1 + seed % m, strategy);
        for (int q = 0; q < 4; ++q) {
          const auto q0 = random_query(rng, g.counts.entities, 1 + uniform_below(rng, 10));
          const std::size_t k = 1 + uniform_below(rng, 4);
          for (auto sem : kAllSemantics) {
            const auto a = cross_graph_k_hop(q0, k, pg, sem);
            const auto b = k_hop(q0, k, single, sem);
            ASSERT_EQ(frontiers(a), frontiers(b)) << "m=" << m << " sem=" << to_string(sem);
            for (std::size_t h = 0; h < k; ++h) EXPECT_EQ(a.hops[h].activated, b.hops[h].activated);
          }
        }
      }
    }
  }
}

TEST(CrossGraphProperty, SinglePartitionIsBitIdentical) {
  const auto g = erdos_renyi(200, 1200, 3, 9);
  const auto single = build_incidence(g.triples, g.counts);
  auto pg = in_memory_partitioned(g, 1, 1);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto q0 = random_query(rng, 200, 5);
    const auto a = cross_graph_k_hop(q0, 3, pg, HopSemantics::cumulative);
    const auto b = k_hop(q0, 3, single, HopSemantics::cumulative);
    EXPECT_EQ(frontiers(a), frontiers(b));
    EXPECT_EQ(cross_graph_paths(q0, 2, pg, 500).paths, reconstruct_paths(q0, 2, single, 500).paths);
  }
}

TEST(CrossGraph, OnlyRoutedPartitionsAreLoaded) {
  auto pg = in_memory_partitioned(tiny_synthetic(), 2, 2);
  pg.cache().record_trace(true);
  cross_graph_k_hop(EntityVector{A}, 1, pg);
  EXPECT_EQ(pg.cache().trace(), (std::vector<std::size_t>{0}));
}

TEST(PartitionedGraph, RejectsMismatchedStore) {
  const auto sg = tiny_synthetic();
  auto plan = partition_degree_aware(sg.triples, 3, 2);
  auto one = materialize_subgraphs(partition_degree_aware(sg.triples, 3, 1), sg.triples, 3);
  EXPECT_THROW(PartitionedGraph(plan, std::make_shared<MemorySubgraphStore>(one), 1), IntegrityError);
}

class SwappingStore final : public SubgraphStore {
 public:
  explicit SwappingStore(std::vector<Subgraph> s) : shards_(std::move(s)) {}
  std::size_t partition_count() const override { return shards_.size(); }
  std::shared_ptr<const Subgraph> load(std::size_t index) const override {
    if (index == 1) return nullptr;
    return std::make_shared<Subgraph>(shards_[(index + 1) % shards_.size()]);
  }

 private:
  std::vector<Subgraph> shards_;
};

TEST(PartitionedGraph, StoreFailuresNameThePartition) {
  const auto sg = tiny_synthetic();
  auto plan = partition_degree_aware(sg.triples, 3, 2);
  auto shards = materialize_subgraphs(plan, sg.triples, 3);
  PartitionedGraph pg(plan, std::make_shared<SwappingStore>(shards), 2);
  try {
    pg.fetch(0);
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("partition 0"), std::string::npos);
  }
  try {
    pg.fetch(1);
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("partition 1"), std::string::npos);
  }
  EXPECT_EQ(pg.cache().size(), 0u);
}

TEST(Batch, GroupsBySignature) {
  const auto sg = tiny_synthetic();
  const auto plan = partition_degree_aware(sg.triples, 3, 2);
  const auto batch = plan_batch({{10, EntityVector{A}, 1}, {11, EntityVector{B}, 1}, {12, EntityVector{A}, 1}}, plan);
  EXPECT_EQ(batch.execution, (std::vector<std::size_t>{0, 2, 1}));
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(batch.execution[batch.restore[j]], j);

  const auto one = plan_batch({{1, EntityVector{B}, 2}}, plan);
  EXPECT_EQ(one.execution, (std::vector<std::size_t>{0}));
  const auto same = plan_batch({{1, EntityVector{A}, 2}, {2, EntityVector{A}, 1}, {3, EntityVector{A}, 3}}, plan);
  EXPECT_EQ(same.execution, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Batch, ReorderingSavesLoadsWithTinyCache) {
  const auto sg = tiny_synthetic();
  const std::vector<BatchQuery> qs{{0, EntityVector{A}, 1}, {1, EntityVector{B}, 1}, {2, EntityVector{A}, 1}};
  auto planned_pg = in_memory_partitioned(sg, 2, 1);
  auto input_pg = in_memory_partitioned(sg, 2, 1);
  const auto planned = run_batch(plan_batch(qs, planned_pg.plan()), planned_pg);
  const auto unordered = run_batch(make_batch(qs, {0, 1, 2}), input_pg);
  EXPECT_EQ(planned_pg.cache().snapshot_counters().loads, 2u);
  EXPECT_EQ(input_pg.cache().snapshot_counters().loads, 3u);
  for (std::size_t j = 0; j < qs.size(); ++j) {
    EXPECT_EQ(planned[j].id, qs[j].id);
    ASSERT_TRUE(planned[j].trace && unordered[j].trace);
    EXPECT_EQ(frontiers(*planned[j].trace), frontiers(*unordered[j].trace));
  }
}

TEST(Batch, SingleQueryMatchesDirectCall) {
  const auto sg = tiny_synthetic();
  auto a = in_memory_partitioned(sg, 2, 1);
  auto b = in_memory_partitioned(sg, 2, 1);
  const auto res = run_batch(plan_batch({{0, EntityVector{A, B}, 3}}, a.plan()), a);
  const auto direct = cross_graph_k_hop(EntityVector{A, B}, 3, b);
  ASSERT_TRUE(res[0].trace);
  EXPECT_EQ(frontiers(*res[0].trace), frontiers(direct));
  EXPECT_EQ(a.cache().snapshot_counters(), b.cache().snapshot_counters());
}

TEST(Batch, ErrorsAreIsolatedPerQuery) {
  auto pg = in_memory_partitioned(tiny_synthetic(), 2, 2);
  const auto res = run_batch(
      plan_batch({{0, EntityVector{A}, 2}, {1, EntityVector{A}, 0}, {2, EntityVector{99}, 1}, {3, EntityVector{A}, 2}},
                 pg.plan()),
      pg);
  ASSERT_EQ(res.size(), 4u);
  EXPECT_TRUE(res[0].trace);
  EXPECT_FALSE(res[1].trace);
  EXPECT_FALSE(res[1].error.empty());
  EXPECT_FALSE(res[2].trace);
  ASSERT_TRUE(res[3].trace);
  EXPECT_EQ(frontiers(*res[0].trace), frontiers(*res[3].trace));
}

TEST(Batch, RejectsNonPermutations) {
  const std::vector<BatchQuery> qs{{0, EntityVector{A}, 1}, {1, EntityVector{B}, 1}};
  EXPECT_THROW(make_batch(qs, {0, 0}), InvalidArgument);
  EXPECT_THROW(make_batch(qs, {0}), InvalidArgument);
  EXPECT_THROW(make_batch(qs, {0, 2}), InvalidArgument);
}

TEST(Batch, ResultsIndependentOfExecutionOrder) {
  const auto g = power_law(300, 2000, 4, 1.1, 21);
  Rng rng(8);
  std::vector<BatchQuery> qs;
  for (std::uint64_t i = 0; i < 30; ++i) qs.push_back({i, random_query(rng, 300, 1 + uniform_below(rng, 6)), 2});
  auto pg1 = in_memory_partitioned(g, 4, 2);
  auto pg2 = in_memory_partitioned(g, 4, 2);
  std::vector<std::size_t> reversed(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) reversed[i] = qs.size() - 1 - i;
  const auto a = run_batch(plan_batch(qs, pg1.plan()), pg1, HopSemantics::cumulative);
  const auto b = run_batch(make_batch(qs, reversed), pg2, HopSemantics::cumulative);
  for (std::size_t j = 0; j < qs.size(); ++j) EXPECT_EQ(frontiers(*a[j].trace), frontiers(*b[j].trace));
}

TEST(GatherTriples, RecoversTheGlobalTable) {
  const auto g = erdos_renyi(100, 500, 3, 2);
  const auto plan = partition_degree_aware(g.triples, 100, 4);
  MemorySubgraphStore store(materialize_subgraphs(plan, g.triples, 3));
  EXPECT_EQ(gather_triples(store, g.triples.size()), g.triples);
  EXPECT_THROW(gather_triples(store, g.triples.size() + 1), IntegrityError);
}

}  // namespace
}  // namespace kghop

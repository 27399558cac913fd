#pragma once
// Benchmark harness: query time (QT), timeout rate (TR), fidelity against the
// reference oracles, and cache load/eviction counts.
//
// A query that hits its depth's timeout is censored: it counts toward TR but
// is left out of the QT mean.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kghop/engine.hpp"
#include "kghop/generate.hpp"
#include "kghop/incidence.hpp"
#include "kghop/oracle.hpp"

namespace kghop {

struct BenchConfig {
  std::vector<std::size_t> depths{1, 2, 3, 4, 5};
  std::vector<std::int64_t> timeouts_ms{2000, 4000, 6000, 8000, 10000};  // parallel to depths
  std::size_t queries_per_depth = 50;
  std::size_t min_seeds = 1;
  std::size_t max_seeds = 20;
  std::uint64_t seed = 42;
  HopSemantics semantics = HopSemantics::frontier;
  std::size_t repetitions = 1;
};

struct BenchRow {
  std::string factor;
  std::string value;
  double qt_ms = 0.0;
  double tr_pct = 0.0;
  std::optional<double> jaccard;  // mean over completed queries, when an oracle ran
  std::uint64_t loads = 0;
  std::uint64_t evictions = 0;
};

struct BenchReport {
  std::string fingerprint;
  std::vector<BenchRow> rows;
};

inline constexpr const char* kCsvHeader = "factor,value,qt_ms,tr_pct,jaccard,loads,evictions";
inline constexpr const char* kCensoringNote =
    "QT is the mean over queries that finished within their timeout; timed-out queries count only toward TR.";

// What the harness runs against: a single in-memory graph or a partitioned
// graph. Oracle triples are optional; without them no Jaccard is reported.
struct BenchTarget {
  const IncidenceGraph* graph = nullptr;
  PartitionedGraph* partitioned = nullptr;
  std::span<const Triple> oracle_triples{};

  std::uint64_t num_entities() const {
    return graph != nullptr ? graph->num_entities() : partitioned->num_entities();
  }
};

inline std::vector<EntityVector> make_workload(std::uint64_t num_entities, std::size_t count, std::size_t min_seeds,
                                               std::size_t max_seeds, Rng& rng) {
  if (min_seeds == 0 || min_seeds > max_seeds) throw InvalidArgument("invalid seed-count range");
  std::vector<EntityVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto seeds = static_cast<std::size_t>(uniform_between(rng, min_seeds, max_seeds));
    out.push_back(random_query(rng, num_entities, seeds));
  }
  return out;
}

// `count` queries cycling over `groups` randomly chosen partitions, seeds drawn
// from each partition's own subjects. Consecutive queries hit different
// partitions, so input order is the worst case for locality.
inline std::vector<EntityVector> make_clustered_workload(const PartitionPlan& plan, std::size_t groups,
                                                         std::size_t count, std::size_t seeds_per_query, Rng& rng) {
  std::vector<std::vector<EntityId>> members(plan.m);
  for (std::uint32_t e = 0; e < plan.assignment.size(); ++e) {
    if (plan.assignment[e] != kNoPartition) members[plan.assignment[e]].push_back(EntityId{e});
  }
  std::vector<std::size_t> chosen;
  for (std::size_t p = 0; p < plan.m; ++p) {
    if (!members[p].empty()) chosen.push_back(p);
  }
  for (std::size_t i = chosen.size(); i > 1; --i) std::swap(chosen[i - 1], chosen[uniform_below(rng, i)]);
  chosen.resize(std::min(groups, chosen.size()));
  if (chosen.empty()) throw InvalidArgument("plan has no populated partitions");
  std::vector<EntityVector> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& pool = members[chosen[i % chosen.size()]];
    out.push_back(random_query(rng, 0, seeds_per_query, pool));
  }
  return out;
}

inline std::string machine_fingerprint() {
  std::ostringstream os;
  os << "threads=" << std::thread::hardware_concurrency();
#if defined(__VERSION__)
  os << "; compiler=" << __VERSION__;
#endif
  return os.str();
}

namespace detail {

inline std::optional<EntityVector> oracle_answer(const EntityVector& q0, std::size_t k, HopSemantics semantics,
                                                 std::span<const Triple> triples, std::uint64_t num_entities) {
  switch (semantics) {
    case HopSemantics::exact_walk:
      if (num_entities > kWalkOracleMaxEntities) return std::nullopt;
      return oracle_walk(q0, k, triples, num_entities);
    case HopSemantics::frontier: return oracle_bfs(q0, k, triples, num_entities).layers.back();
    case HopSemantics::cumulative: return oracle_bfs(q0, k, triples, num_entities).cumulative.back();
  }
  return std::nullopt;
}

}  // namespace detail

inline BenchReport run_benchmark(const BenchConfig& cfg, BenchTarget target) {
  if ((target.graph == nullptr) == (target.partitioned == nullptr)) {
    throw InvalidArgument("benchmark needs exactly one target");
  }
  if (cfg.depths.size() != cfg.timeouts_ms.size()) throw InvalidArgument("one timeout per depth is required");
  for (auto d : cfg.depths) {
    if (d == 0) throw InvalidArgument("depths must be >= 1");
  }
  for (auto t : cfg.timeouts_ms) {
    if (t < 0) throw InvalidArgument("timeouts must be non-negative");
  }

  BenchReport report;
  {
    std::ostringstream os;
    os << "target=" << (target.graph != nullptr ? "single" : "partitioned")
       << "; semantics=" << to_string(cfg.semantics) << "; seed=" << cfg.seed
       << "; queries_per_depth=" << cfg.queries_per_depth << "; repetitions=" << cfg.repetitions << "; "
       << machine_fingerprint();
    report.fingerprint = os.str();
  }

  Rng rng(cfg.seed);
  const auto n = target.num_entities();
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
    const auto k = cfg.depths[di];
    const auto budget = std::chrono::milliseconds(cfg.timeouts_ms[di]);
    const auto workload = make_workload(n, cfg.queries_per_depth, cfg.min_seeds, cfg.max_seeds, rng);
    const CacheCounters before =
        target.partitioned != nullptr ? target.partitioned->cache().snapshot_counters() : CacheCounters{};

    double total_ms = 0.0;
    std::size_t finished = 0;
    std::size_t timed_out = 0;
    double jaccard_sum = 0.0;
    std::size_t jaccard_count = 0;

    for (std::size_t rep = 0; rep < std::max<std::size_t>(cfg.repetitions, 1); ++rep) {
      for (const auto& q0 : workload) {
        const auto start = Deadline::clock::now();
        const Deadline deadline(start + budget);
        std::optional<HopTrace> trace;
        try {
          trace = target.graph != nullptr ? k_hop(q0, k, *target.graph, cfg.semantics, &deadline)
                                          : cross_graph_k_hop(q0, k, *target.partitioned, cfg.semantics, &deadline);
        } catch (const QueryTimeout&) {
        }
        const auto elapsed = Deadline::clock::now() - start;
        if (!trace || elapsed >= budget) {
          ++timed_out;
          continue;
        }
        ++finished;
        total_ms += std::chrono::duration<double, std::milli>(elapsed).count();
        if (rep == 0 && !target.oracle_triples.empty()) {
          if (auto expected = detail::oracle_answer(q0, k, cfg.semantics, target.oracle_triples, n)) {
            jaccard_sum += jaccard(trace->final_frontier(), *expected);
            ++jaccard_count;
          }
        }
      }
    }

    BenchRow row;
    row.factor = "hops";
    row.value = std::to_string(k);
    row.qt_ms = finished == 0 ? 0.0 : total_ms / static_cast<double>(finished);
    const auto attempts = finished + timed_out;
    row.tr_pct = attempts == 0 ? 0.0 : 100.0 * static_cast<double>(timed_out) / static_cast<double>(attempts);
    if (jaccard_count > 0) row.jaccard = jaccard_sum / static_cast<double>(jaccard_count);
    if (target.partitioned != nullptr) {
      const auto after = target.partitioned->cache().snapshot_counters();
      row.loads = after.loads - before.loads;
      row.evictions = after.evictions - before.evictions;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct ScalingConfig {
  std::vector<std::size_t> hop_values{1, 2, 3, 4, 5};
  std::vector<std::size_t> batch_sizes{1, 10, 25, 50, 100, 150};
  std::vector<std::size_t> cache_sizes{1, 2, 4, 8, 16};
  std::size_t default_hops = 2;
  std::size_t default_batch = 50;
  std::size_t default_cache = 0;  // 0 = number of partitions
  std::size_t queries = 150;
  std::size_t min_seeds = 1;
  std::size_t max_seeds = 20;
  std::uint64_t seed = 42;
  HopSemantics semantics = HopSemantics::frontier;
  bool sweep_semantics = true;
};

struct ScalingRow {
  BenchRow row;
  std::size_t cache_capacity = 0;
  std::vector<std::size_t> trace;  // partition access sequence, for replay
};

// Runs `queries` in consecutive batches of `batch_size` against a fresh cache.
inline ScalingRow run_scaling_cell(const PartitionPlan& plan, const std::shared_ptr<const SubgraphStore>& store,
                                   const std::vector<EntityVector>& workload, std::size_t hops,
                                   std::size_t batch_size, std::size_t cache_capacity, HopSemantics semantics) {
  if (batch_size == 0) throw InvalidArgument("batch size must be >= 1");
  PartitionedGraph pg(plan, store, cache_capacity);
  pg.cache().record_trace(true);
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t begin = 0; begin < workload.size(); begin += batch_size) {
    std::vector<BatchQuery> batch;
    for (std::size_t i = begin; i < std::min(workload.size(), begin + batch_size); ++i) {
      batch.push_back({i, workload[i], hops});
    }
    run_batch(plan_batch(std::move(batch), plan), pg, semantics);
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  ScalingRow out;
  out.cache_capacity = cache_capacity;
  out.row.qt_ms = workload.empty() ? 0.0 : ms / static_cast<double>(workload.size());
  const auto c = pg.cache().snapshot_counters();
  out.row.loads = c.loads;
  out.row.evictions = c.evictions;
  out.trace = pg.cache().trace();
  return out;
}

// Hop, batch-size and cache-size sweeps over one fixed random workload, plus
// a hop-semantics sweep. Each cell starts from an empty cache.
inline std::vector<ScalingRow> run_scaling_suite(const PartitionPlan& plan,
                                                 const std::shared_ptr<const SubgraphStore>& store,
                                                 const ScalingConfig& cfg) {
  Rng rng(cfg.seed);
  const auto workload = make_workload(plan.assignment.size(), cfg.queries, cfg.min_seeds, cfg.max_seeds, rng);
  const std::size_t cache = cfg.default_cache == 0 ? plan.m : cfg.default_cache;
  std::vector<ScalingRow> rows;
  auto add = [&](const char* factor, std::string value, std::size_t hops, std::size_t batch, std::size_t cap,
                 HopSemantics sem) {
    auto r = run_scaling_cell(plan, store, workload, hops, batch, cap, sem);
    r.row.factor = factor;
    r.row.value = std::move(value);
    rows.push_back(std::move(r));
  };
  for (auto h : cfg.hop_values) add("hops", std::to_string(h), h, cfg.default_batch, cache, cfg.semantics);
  for (auto b : cfg.batch_sizes) add("batch_size", std::to_string(b), cfg.default_hops, b, cache, cfg.semantics);
  for (auto c : cfg.cache_sizes) add("cache_size", std::to_string(c), cfg.default_hops, cfg.default_batch, c, cfg.semantics);
  if (cfg.sweep_semantics) {
    for (auto s : kAllSemantics) add("semantics", std::string(to_string(s)), cfg.default_hops, cfg.default_batch, cache, s);
  }
  return rows;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.factor << ',' << r.value << ',' << format_number(r.qt_ms) << ',' << format_number(r.tr_pct) << ','
       << (r.jaccard ? format_number(*r.jaccard) : std::string()) << ',' << r.loads << ',' << r.evictions << '\n';
  }
}

inline void write_table(std::ostream& os, const BenchReport& report) {
  os << "# " << report.fingerprint << '\n' << "# " << kCensoringNote << '\n';
  os << std::left << std::setw(12) << "factor" << std::setw(12) << "value" << std::right << std::setw(14) << "QT (ms)"
     << std::setw(10) << "TR (%)" << std::setw(10) << "jaccard" << std::setw(10) << "loads" << std::setw(10)
     << "evicts" << '\n';
  for (const auto& r : report.rows) {
    os << std::left << std::setw(12) << r.factor << std::setw(12) << r.value << std::right << std::setw(14)
       << format_number(r.qt_ms) << std::setw(10) << format_number(r.tr_pct) << std::setw(10)
       << (r.jaccard ? format_number(*r.jaccard) : std::string("-")) << std::setw(10) << r.loads << std::setw(10)
       << r.evictions << '\n';
  }
}

}  // namespace kghop

// kghop command-line tool: build, partition, query, bench, scale, verify.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error,
// 3 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kghop/kghop.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSemanticsNames{"exact", "frontier", "cumulative"};

std::vector<std::string> parse_entity_arg(const std::string& arg) {
  std::vector<std::string> labels;
  if (fs::is_regular_file(arg)) {
    std::ifstream in(arg);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) labels.push_back(line);
    }
    return labels;
  }
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) labels.push_back(item);
  }
  return labels;
}

json labels_of(const kghop::EntityVector& v, const kghop::Dictionary& dict) {
  json arr = json::array();
  for (auto e : v) arr.push_back(dict.label(e.value));
  return arr;
}

// --- build ----------------------------------------------------------------

struct BuildArgs {
  std::string triples;
  std::string out;
};

int run_build(const BuildArgs& a) {
  std::ifstream in(a.triples);
  if (!in) throw kghop::IntegrityError("cannot open " + a.triples);
  auto table = kghop::ingest_triples(in);
  const auto counts = table.counts();
  kghop::GraphBundle bundle{kghop::build_incidence(table.triples, counts), std::move(table.entities),
                            std::move(table.relations)};
  kghop::save_graph_dir(bundle, a.out);
  std::cerr << "entities=" << counts.entities << " relations=" << counts.relations << " triples=" << counts.triples
            << '\n';
  return 0;
}

// --- partition ------------------------------------------------------------

struct PartitionArgs {
  std::string graph;
  std::size_t m = 0;
  std::string strategy = "lpt";
  std::string out;
};

int run_partition(const PartitionArgs& a) {
  const auto bundle = kghop::load_graph_dir(a.graph);
  const auto triples = bundle.graph.triples();
  const auto strategy = kghop::parse_strategy(a.strategy);
  const auto plan = kghop::make_plan(strategy, triples, bundle.graph.num_entities(), a.m);
  const auto subgraphs = kghop::materialize_subgraphs(plan, triples, bundle.graph.num_relations());
  kghop::save_partitioned(a.out, plan, subgraphs, strategy, bundle.graph.counts(), &bundle.entities,
                          &bundle.relations);
  for (std::size_t p = 0; p < plan.m; ++p) {
    std::cerr << "partition " << p << ": subjects=" << plan.subjects[p] << " triples=" << plan.loads[p] << '\n';
  }
  return 0;
}

// --- query ----------------------------------------------------------------

struct QueryArgs {
  std::string graph;
  std::string partitioned;
  std::string entities;
  std::size_t hops = 1;
  std::string semantics = "frontier";
  std::size_t cache = 0;
  bool paths = false;
  std::size_t max_paths = kghop::kDefaultMaxPaths;
};

void emit_trace(const kghop::HopTrace& trace, const kghop::Dictionary& dict) {
  for (std::size_t h = 0; h < trace.hops.size(); ++h) {
    const auto& hop = trace.hops[h];
    json line{{"hop", h + 1},
              {"count", hop.frontier.size()},
              {"activated_triples", hop.activated.size()},
              {"entities", labels_of(hop.frontier, dict)}};
    std::cout << line.dump() << '\n';
  }
}

void emit_paths(const kghop::PathSet& paths, const kghop::Dictionary& entities, const kghop::Dictionary& relations) {
  for (const auto& path : paths.paths) {
    json steps = json::array();
    for (const auto& s : path.steps) {
      steps.push_back({{"subject", entities.label(s.subject.value)},
                       {"relation", relations.label(s.relation.value)},
                       {"object", entities.label(s.object.value)}});
    }
    std::cout << json{{"path", steps}}.dump() << '\n';
  }
  std::cout << json{{"paths", paths.paths.size()}, {"paths_truncated", paths.truncated}}.dump() << '\n';
}

int run_query(const QueryArgs& a) {
  const auto semantics = kghop::parse_semantics(a.semantics);
  const auto labels = parse_entity_arg(a.entities);
  if (!a.graph.empty()) {
    const auto bundle = kghop::load_graph_dir(a.graph);
    const auto lookup = kghop::lookup_entities(labels, bundle.entities);
    for (const auto& u : lookup.unknown) std::cerr << "unknown entity: " << u << '\n';
    emit_trace(kghop::k_hop(lookup.active, a.hops, bundle.graph, semantics), bundle.entities);
    if (a.paths) {
      emit_paths(kghop::reconstruct_paths(lookup.active, a.hops, bundle.graph, a.max_paths), bundle.entities,
                 bundle.relations);
    }
    return 0;
  }
  const fs::path dir = a.partitioned;
  const auto entities = kghop::load_labels(dir / "entities.txt");
  const auto relations = kghop::load_labels(dir / "relations.txt");
  auto mf = kghop::load_manifest(dir / "manifest.json");
  const std::size_t capacity = a.cache == 0 ? mf.m : a.cache;
  auto pg = kghop::open_partitioned(dir, capacity);
  const auto lookup = kghop::lookup_entities(labels, entities);
  for (const auto& u : lookup.unknown) std::cerr << "unknown entity: " << u << '\n';
  emit_trace(kghop::cross_graph_k_hop(lookup.active, a.hops, pg, semantics), entities);
  if (a.paths) emit_paths(kghop::cross_graph_paths(lookup.active, a.hops, pg, a.max_paths), entities, relations);
  const auto c = pg.cache().snapshot_counters();
  std::cerr << "cache: hits=" << c.hits << " misses=" << c.misses << " loads=" << c.loads
            << " evictions=" << c.evictions << '\n';
  return 0;
}

// --- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string graph;
  std::string partitioned;
  std::vector<std::size_t> depths{1, 2, 3, 4, 5};
  std::vector<std::int64_t> timeouts{2000, 4000, 6000, 8000, 10000};
  std::size_t queries = 50;
  std::size_t min_seeds = 1;
  std::size_t max_seeds = 20;
  std::uint64_t seed = 42;
  std::string semantics = "frontier";
  std::size_t repetitions = 1;
  std::size_t cache = 0;
  bool no_oracle = false;
  std::string format = "csv";
};

void print_report(const kghop::BenchReport& report, const std::string& format) {
  if (format == "text") {
    kghop::write_table(std::cout, report);
  } else {
    std::cerr << "# " << report.fingerprint << "\n# " << kghop::kCensoringNote << '\n';
    kghop::write_csv(std::cout, report.rows);
  }
}

int run_bench(const BenchArgs& a) {
  if (a.depths.size() != a.timeouts.size()) throw UsageError("--depths and --timeouts must have equal length");
  kghop::BenchConfig cfg;
  cfg.depths = a.depths;
  cfg.timeouts_ms = a.timeouts;
  cfg.queries_per_depth = a.queries;
  cfg.min_seeds = a.min_seeds;
  cfg.max_seeds = a.max_seeds;
  cfg.seed = a.seed;
  cfg.semantics = kghop::parse_semantics(a.semantics);
  cfg.repetitions = a.repetitions;

  if (!a.graph.empty()) {
    const auto bundle = kghop::load_graph_dir(a.graph);
    std::vector<kghop::Triple> triples;
    if (!a.no_oracle) triples = bundle.graph.triples();
    print_report(kghop::run_benchmark(cfg, {&bundle.graph, nullptr, triples}), a.format);
    return 0;
  }
  const fs::path dir = a.partitioned;
  auto mf = kghop::load_manifest(dir / "manifest.json");
  std::vector<kghop::Triple> triples;
  if (!a.no_oracle) triples = kghop::gather_triples(kghop::DiskSubgraphStore(dir, mf), mf.counts.triples);
  auto pg = kghop::open_partitioned(dir, a.cache == 0 ? mf.m : a.cache);
  print_report(kghop::run_benchmark(cfg, {nullptr, &pg, triples}), a.format);
  return 0;
}

// --- scale ----------------------------------------------------------------

struct ScaleArgs {
  std::string partitioned;
  kghop::ScalingConfig cfg;
  std::string semantics = "frontier";
  std::string format = "csv";
};

int run_scale(ScaleArgs a) {
  const fs::path dir = a.partitioned;
  auto mf = kghop::load_manifest(dir / "manifest.json");
  auto plan = kghop::load_plan(dir, mf);
  auto store = std::make_shared<kghop::DiskSubgraphStore>(dir, mf);
  a.cfg.semantics = kghop::parse_semantics(a.semantics);
  const auto rows = kghop::run_scaling_suite(plan, store, a.cfg);
  kghop::BenchReport report;
  {
    std::ostringstream os;
    os << "scaling suite; m=" << plan.m << "; queries=" << a.cfg.queries << "; seed=" << a.cfg.seed << "; "
       << kghop::machine_fingerprint();
    report.fingerprint = os.str();
  }
  for (const auto& r : rows) report.rows.push_back(r.row);
  print_report(report, a.format);
  return 0;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string graph;
  std::string partitioned;
  std::size_t queries = 20;
  std::uint64_t seed = 1;
  std::size_t max_hops = 5;
  std::size_t cache = 0;
};

std::string format_jaccard(double j) { return j == 1.0 ? "1.0" : kghop::format_number(j); }

int run_verify(const VerifyArgs& a) {
  const auto bundle = kghop::load_graph_dir(a.graph);
  const auto triples = bundle.graph.triples();
  const auto n = bundle.graph.num_entities();

  std::optional<kghop::PartitionedGraph> pg;
  if (!a.partitioned.empty()) {
    const fs::path dir = a.partitioned;
    auto mf = kghop::load_manifest(dir / "manifest.json");
    if (mf.counts != bundle.graph.counts()) throw kghop::IntegrityError("partitioned graph does not match --graph");
    pg.emplace(kghop::open_partitioned(dir, a.cache == 0 ? mf.m : a.cache));
  }

  kghop::Rng rng(a.seed);
  const auto workload = kghop::make_workload(n, a.queries, 1, 20, rng);
  bool ok = true;
  for (std::size_t k = 1; k <= a.max_hops; ++k) {
    for (auto sem : kghop::kAllSemantics) {
      const bool oracle = sem != kghop::HopSemantics::exact_walk || n <= kghop::kWalkOracleMaxEntities;
      double single_min = 1.0;
      double part_min = 1.0;
      for (const auto& q0 : workload) {
        const auto single = kghop::k_hop(q0, k, bundle.graph, sem);
        std::optional<kghop::EntityVector> expected;
        if (oracle) expected = kghop::detail::oracle_answer(q0, k, sem, triples, n);
        if (expected) single_min = std::min(single_min, kghop::jaccard(single.final_frontier(), *expected));
        if (pg) {
          const auto part = kghop::cross_graph_k_hop(q0, k, *pg, sem);
          double j = kghop::jaccard(part.final_frontier(), expected ? *expected : single.final_frontier());
          if (part != single) j = 0.0;  // any per-hop divergence fails the row
          part_min = std::min(part_min, j);
        }
      }
      const char* reference = oracle ? "oracle" : "single";
      if (oracle) {
        std::cout << "k=" << k << " semantics=" << kghop::to_string(sem) << " target=single reference=oracle"
                  << " jaccard=" << format_jaccard(single_min) << '\n';
        ok = ok && single_min == 1.0;
      }
      if (pg) {
        std::cout << "k=" << k << " semantics=" << kghop::to_string(sem) << " target=partitioned reference="
                  << reference << " jaccard=" << format_jaccard(part_min) << '\n';
        ok = ok && part_min == 1.0;
      }
    }
  }
  if (!ok) {
    std::cerr << "verification FAILED\n";
    return kExitVerify;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-hop knowledge-graph retrieval over sparse incidence structures"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* cmd_build = app.add_subcommand("build", "Ingest a TSV triple file and save the incidence graph");
  cmd_build->add_option("--triples", build.triples, "Tab-separated subject/relation/object file")->required();
  cmd_build->add_option("--out", build.out, "Output graph directory")->required();

  PartitionArgs part;
  auto* cmd_part = app.add_subcommand("partition", "Partition a graph into subject-cohesive shards");
  cmd_part->add_option("--graph", part.graph, "Graph directory")->required();
  cmd_part->add_option("--m", part.m, "Number of partitions")->required()->check(CLI::PositiveNumber);
  cmd_part->add_option("--strategy", part.strategy, "lpt or hash")->check(CLI::IsMember({"lpt", "hash"}));
  cmd_part->add_option("--out", part.out, "Output partition directory")->required();

  QueryArgs query;
  auto* cmd_query = app.add_subcommand("query", "Run a k-hop query; prints JSON lines");
  auto* q_graph = cmd_query->add_option("--graph", query.graph, "Graph directory");
  auto* q_part = cmd_query->add_option("--partitioned", query.partitioned, "Partition directory");
  q_graph->excludes(q_part);
  cmd_query->add_option("--entities", query.entities, "Comma-separated labels or a file with one label per line")
      ->required();
  cmd_query->add_option("--hops", query.hops, "Hop count k")->required()->check(CLI::PositiveNumber);
  cmd_query->add_option("--semantics", query.semantics, "exact, frontier or cumulative")
      ->check(CLI::IsMember(kSemanticsNames));
  cmd_query->add_option("--cache", query.cache, "Cache capacity in subgraphs (default: m)");
  cmd_query->add_flag("--paths", query.paths, "Also reconstruct length-k paths");
  cmd_query->add_option("--max-paths", query.max_paths, "Path cap");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Measure QT/TR/Jaccard per hop depth");
  auto* b_graph = cmd_bench->add_option("--graph", bench.graph, "Graph directory");
  auto* b_part = cmd_bench->add_option("--partitioned", bench.partitioned, "Partition directory");
  b_graph->excludes(b_part);
  cmd_bench->add_option("--depths", bench.depths, "Hop depths")->delimiter(',');
  cmd_bench->add_option("--timeouts", bench.timeouts, "Per-depth timeouts in ms")->delimiter(',');
  cmd_bench->add_option("--queries", bench.queries, "Queries per depth");
  cmd_bench->add_option("--min-seeds", bench.min_seeds, "Minimum seed entities per query");
  cmd_bench->add_option("--max-seeds", bench.max_seeds, "Maximum seed entities per query");
  cmd_bench->add_option("--seed", bench.seed, "Workload RNG seed");
  cmd_bench->add_option("--semantics", bench.semantics)->check(CLI::IsMember(kSemanticsNames));
  cmd_bench->add_option("--repetitions", bench.repetitions);
  cmd_bench->add_option("--cache", bench.cache, "Cache capacity (default: m)");
  cmd_bench->add_flag("--no-oracle", bench.no_oracle, "Skip Jaccard against the reference oracle");
  cmd_bench->add_option("--format", bench.format)->check(CLI::IsMember({"csv", "text"}));

  ScaleArgs scale;
  auto* cmd_scale = app.add_subcommand("scale", "Hop / batch-size / cache-size / semantics sweeps");
  cmd_scale->add_option("--partitioned", scale.partitioned, "Partition directory")->required();
  cmd_scale->add_option("--queries", scale.cfg.queries);
  cmd_scale->add_option("--seed", scale.cfg.seed);
  cmd_scale->add_option("--hops-list", scale.cfg.hop_values)->delimiter(',');
  cmd_scale->add_option("--batch-sizes", scale.cfg.batch_sizes)->delimiter(',');
  cmd_scale->add_option("--cache-sizes", scale.cfg.cache_sizes)->delimiter(',');
  cmd_scale->add_option("--default-hops", scale.cfg.default_hops);
  cmd_scale->add_option("--default-batch", scale.cfg.default_batch);
  cmd_scale->add_option("--default-cache", scale.cfg.default_cache);
  cmd_scale->add_option("--semantics", scale.semantics)->check(CLI::IsMember(kSemanticsNames));
  cmd_scale->add_option("--format", scale.format)->check(CLI::IsMember({"csv", "text"}));

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "Check retrieval against reference oracles");
  cmd_verify->add_option("--graph", verify.graph, "Graph directory")->required();
  cmd_verify->add_option("--partitioned", verify.partitioned, "Partition directory built from --graph");
  cmd_verify->add_option("--queries", verify.queries);
  cmd_verify->add_option("--seed", verify.seed);
  cmd_verify->add_option("--max-hops", verify.max_hops)->check(CLI::PositiveNumber);
  cmd_verify->add_option("--cache", verify.cache);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cmd_build) return run_build(build);
    if (*cmd_part) return run_partition(part);
    if (*cmd_query) {
      if (query.graph.empty() == query.partitioned.empty()) throw UsageError("give exactly one of --graph or --partitioned");
      return run_query(query);
    }
    if (*cmd_bench) {
      if (bench.graph.empty() == bench.partitioned.empty()) throw UsageError("give exactly one of --graph or --partitioned");
      return run_bench(bench);
    }
    if (*cmd_scale) return run_scale(scale);
    if (*cmd_verify) return run_verify(verify);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

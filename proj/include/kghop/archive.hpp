#pragma once
// On-disk formats.
//
// Binary files share one container layout, all integers little-endian:
//
//   offset  size  field
//   0       4     magic ("LKG1" graph, "LKM1" shard map, "LKP1" plan)
//   4       2     version (1)
//   6       1     endianness flag (1 = little)
//   7       1     id width in bytes (4 or 8)
//   8       8*F   F u64 header fields (per file kind)
//   8+8F    8     payload length in bytes
//   16+8F   N     payload
//   16+8F+N 4     CRC-32 (zlib polynomial) of every preceding byte
//
// Graph payload (F = 3: |E|, |R|, |T|): SUB row offsets as u64[|E|+1], then
// SUB columns, OBJ and REL as id-width integers of length |T| each.
//
// Dictionaries are UTF-8 text, one label per line, line index = id.
// A partition directory holds manifest.json, the plan, one graph + map pair
// per shard, and copies of both dictionaries.

#include <zlib.h>

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kghop/core.hpp"
#include "kghop/engine.hpp"
#include "kghop/error.hpp"
#include "kghop/incidence.hpp"
#include "kghop/partition.hpp"

namespace kghop {

namespace fs = std::filesystem;

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::array<char, 4> kGraphMagic{'L', 'K', 'G', '1'};
inline constexpr std::array<char, 4> kShardMapMagic{'L', 'K', 'M', '1'};
inline constexpr std::array<char, 4> kPlanMagic{'L', 'K', 'P', '1'};

enum class IdWidth { automatic, narrow, wide };

namespace detail {

inline std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  constexpr std::size_t kChunk = std::size_t{1} << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const auto n = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void id(std::uint64_t v, unsigned width) { le(v, width); }
  void bytes(std::span<const char> s) { buf_.insert(buf_.end(), s.begin(), s.end()); }

  std::vector<std::uint8_t>& buffer() noexcept { return buf_; }

 private:
  void le(std::uint64_t v, unsigned n) {
    for (unsigned i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint64_t le(unsigned n) {
    if (pos_ + n > data_.size()) throw TruncatedError("unexpected end of data");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < n; ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
    pos_ += n;
    return v;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

inline unsigned resolve_width(IdWidth width, std::uint64_t largest) {
  switch (width) {
    case IdWidth::narrow:
      if (largest > 0xFFFFFFFFull) throw InvalidArgument("counts do not fit 32-bit ids");
      return 4;
    case IdWidth::wide: return 8;
    case IdWidth::automatic: return largest > 0xFFFFFFFFull ? 8 : 4;
  }
  return 8;
}

inline std::string describe_magic(std::span<const std::uint8_t> m) {
  std::string s;
  for (auto c : m) {
    if (c >= 0x20 && c < 0x7F) {
      s.push_back(static_cast<char>(c));
    } else {
      static constexpr char kHex[] = "0123456789abcdef";
      s += "\\x";
      s.push_back(kHex[c >> 4]);
      s.push_back(kHex[c & 15]);
    }
  }
  return s;
}

inline std::vector<std::uint8_t> seal(const std::array<char, 4>& magic, unsigned width,
                                      std::span<const std::uint64_t> fields, std::span<const std::uint8_t> payload) {
  ByteWriter w;
  w.bytes(magic);
  w.u16(kFormatVersion);
  w.u8(1);
  w.u8(static_cast<std::uint8_t>(width));
  for (auto f : fields) w.u64(f);
  w.u64(payload.size());
  auto& out = w.buffer();
  out.insert(out.end(), payload.begin(), payload.end());
  const auto crc = crc32_of(out);
  w.u32(crc);
  return std::move(out);
}

struct Unsealed {
  unsigned width = 4;
  std::vector<std::uint64_t> fields;
  std::span<const std::uint8_t> payload;
};

// Checks, in order: magic, version, endianness, width, length, checksum.
inline Unsealed unseal(std::span<const std::uint8_t> file, const std::array<char, 4>& magic, std::size_t num_fields) {
  if (file.size() < 4) throw TruncatedError("file shorter than its magic number");
  if (std::memcmp(file.data(), magic.data(), 4) != 0) {
    throw BadMagicError("bad magic '" + describe_magic(file.first(4)) + "', expected '" +
                        std::string(magic.begin(), magic.end()) + "'");
  }
  const std::size_t header = 8 + 8 * num_fields + 8;
  if (file.size() < header) throw TruncatedError("file shorter than its header");
  ByteReader r(file);
  r.u32();
  const auto version = r.u16();
  if (version != kFormatVersion) {
    throw VersionError("unsupported format version " + std::to_string(version) + ", expected " +
                       std::to_string(kFormatVersion));
  }
  if (r.u8() != 1) throw FormatError("unsupported endianness flag");
  Unsealed u;
  u.width = r.u8();
  if (u.width != 4 && u.width != 8) throw FormatError("invalid id width " + std::to_string(u.width));
  for (std::size_t i = 0; i < num_fields; ++i) u.fields.push_back(r.u64());
  const auto length = r.u64();
  if (length > file.size() || file.size() - header < length + 4) {
    throw TruncatedError("file truncated: payload of " + std::to_string(length) + " bytes is incomplete");
  }
  if (file.size() != header + length + 4) throw FormatError("trailing bytes after checksum");
  const auto body = file.first(header + length);
  ByteReader tail(file.subspan(header + length));
  const auto stored = tail.u32();
  const auto actual = crc32_of(body);
  if (stored != actual) throw ChecksumError("checksum mismatch");
  u.payload = file.subspan(header, length);
  return u;
}

inline std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Writes through a temporary then renames, so readers never see half a file.
inline void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

template <typename T>
std::vector<T> read_ids(ByteReader& r, std::uint64_t n, unsigned width, std::uint64_t bound, const char* what) {
  std::vector<T> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto v = r.le(width);
    if (v >= bound || v > kMaxIdSpace) throw FormatError(std::string(what) + " id out of range");
    out.push_back(T{static_cast<std::uint32_t>(v)});
  }
  return out;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_graph(const IncidenceGraph& g, IdWidth width = IdWidth::automatic) {
  const auto& c = g.counts();
  const unsigned w = detail::resolve_width(width, std::max({c.entities, c.relations, c.triples}));
  detail::ByteWriter p;
  for (auto off : g.row_offsets()) p.u64(off);
  for (auto t : g.columns()) p.id(t.value, w);
  for (auto e : g.objects()) p.id(e.value, w);
  for (auto r : g.relations()) p.id(r.value, w);
  const std::uint64_t fields[] = {c.entities, c.relations, c.triples};
  return detail::seal(kGraphMagic, w, fields, p.buffer());
}

inline IncidenceGraph decode_graph(std::span<const std::uint8_t> file) {
  const auto u = detail::unseal(file, kGraphMagic, 3);
  const GraphCounts c{u.fields[0], u.fields[1], u.fields[2]};
  if (c.entities > kMaxIdSpace || c.relations > kMaxIdSpace || c.triples > kMaxIdSpace) {
    throw FormatError("graph exceeds the 32-bit in-memory id space");
  }
  const std::uint64_t expected = (c.entities + 1) * 8 + 3 * c.triples * u.width;
  if (u.payload.size() != expected) throw FormatError("graph payload size does not match its header counts");
  detail::ByteReader r(u.payload);
  std::vector<std::uint64_t> offsets(c.entities + 1);
  for (auto& off : offsets) off = r.u64();
  auto columns = detail::read_ids<TripleId>(r, c.triples, u.width, c.triples, "triple");
  auto objects = detail::read_ids<EntityId>(r, c.triples, u.width, c.entities, "entity");
  auto relations = detail::read_ids<RelationId>(r, c.triples, u.width, c.relations, "relation");
  try {
    return IncidenceGraph::from_parts(c, std::move(offsets), std::move(columns), std::move(objects),
                                      std::move(relations));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid graph structure: ") + e.what());
  }
}

inline void save_graph(const IncidenceGraph& g, const fs::path& path, IdWidth width = IdWidth::automatic) {
  detail::write_file(path, encode_graph(g, width));
}

inline IncidenceGraph load_graph(const fs::path& path) { return decode_graph(detail::read_file(path)); }

inline void save_labels(const Dictionary& dict, const fs::path& path) {
  std::string text;
  for (const auto& label : dict.labels()) {
    if (label.find_first_of("\n\r") != std::string::npos) throw InvalidArgument("label contains a line break");
    text += label;
    text += '\n';
  }
  detail::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline Dictionary load_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IntegrityError("cannot open " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) labels.push_back(line);
  return Dictionary::from_labels(std::move(labels));
}

// Single-graph directory: graph.lkg + entities.txt + relations.txt.
struct GraphBundle {
  IncidenceGraph graph;
  Dictionary entities;
  Dictionary relations;
};

inline void save_graph_dir(const GraphBundle& b, const fs::path& dir) {
  fs::create_directories(dir);
  save_graph(b.graph, dir / "graph.lkg");
  save_labels(b.entities, dir / "entities.txt");
  save_labels(b.relations, dir / "relations.txt");
}

inline GraphBundle load_graph_dir(const fs::path& dir) {
  GraphBundle b{load_graph(dir / "graph.lkg"), load_labels(dir / "entities.txt"), load_labels(dir / "relations.txt")};
  if (b.entities.size() != b.graph.num_entities() || b.relations.size() != b.graph.num_relations()) {
    throw FormatError("dictionary sizes do not match the graph in " + dir.string());
  }
  return b;
}

inline std::vector<std::uint8_t> encode_shard_map(const Subgraph& sg, IdWidth width = IdWidth::automatic) {
  std::uint64_t largest = 0;
  for (auto e : sg.entity_to_global) largest = std::max<std::uint64_t>(largest, e.value);
  for (auto t : sg.triple_to_global) largest = std::max<std::uint64_t>(largest, t.value);
  const unsigned w = detail::resolve_width(width, largest);
  detail::ByteWriter p;
  for (auto e : sg.entity_to_global) p.id(e.value, w);
  for (auto t : sg.triple_to_global) p.id(t.value, w);
  const std::uint64_t fields[] = {sg.index, sg.entity_to_global.size(), sg.num_subjects, sg.triple_to_global.size()};
  return detail::seal(kShardMapMagic, w, fields, p.buffer());
}

inline Subgraph decode_subgraph(std::span<const std::uint8_t> graph_file, std::span<const std::uint8_t> map_file) {
  Subgraph sg;
  sg.graph = decode_graph(graph_file);
  const auto u = detail::unseal(map_file, kShardMapMagic, 4);
  sg.index = u.fields[0];
  const auto entities = u.fields[1];
  sg.num_subjects = u.fields[2];
  const auto triples = u.fields[3];
  if (entities != sg.graph.num_entities() || triples != sg.graph.num_triples() || sg.num_subjects > entities) {
    throw FormatError("shard map does not match its graph");
  }
  if (u.payload.size() != (entities + triples) * u.width) throw FormatError("shard map payload size mismatch");
  detail::ByteReader r(u.payload);
  sg.entity_to_global = detail::read_ids<EntityId>(r, entities, u.width, kMaxIdSpace, "entity");
  sg.triple_to_global = detail::read_ids<TripleId>(r, triples, u.width, kMaxIdSpace, "triple");
  return sg;
}

inline std::vector<std::uint8_t> encode_plan(const PartitionPlan& plan) {
  detail::ByteWriter p;
  for (auto a : plan.assignment) p.u32(a);
  const std::uint64_t fields[] = {plan.m, plan.assignment.size()};
  return detail::seal(kPlanMagic, 4, fields, p.buffer());
}

// The file stores only m and P; loads come from the manifest.
inline std::pair<std::size_t, std::vector<std::uint32_t>> decode_plan(std::span<const std::uint8_t> file) {
  const auto u = detail::unseal(file, kPlanMagic, 2);
  const auto m = u.fields[0];
  const auto n = u.fields[1];
  if (u.width != 4 || u.payload.size() != n * 4) throw FormatError("plan payload size mismatch");
  detail::ByteReader r(u.payload);
  std::vector<std::uint32_t> assignment(n);
  for (auto& a : assignment) {
    a = r.u32();
    if (a != kNoPartition && a >= m) throw FormatError("plan assigns a subject to partition " + std::to_string(a));
  }
  return {static_cast<std::size_t>(m), std::move(assignment)};
}

struct ShardEntry {
  std::size_t index = 0;
  std::string graph_file;
  std::string map_file;
  std::uint64_t triples = 0;
  std::uint64_t subjects = 0;
};

struct PartitionManifest {
  std::size_t m = 0;
  std::string strategy;
  GraphCounts counts;
  std::string plan_file = "plan.lkp";
  std::vector<ShardEntry> shards;
};

inline std::string shard_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shard-%05zu", index);
  return buf;
}

inline void save_manifest(const PartitionManifest& mf, const fs::path& path) {
  nlohmann::ordered_json j;
  j["format"] = "kghop-partitions";
  j["version"] = kFormatVersion;
  j["m"] = mf.m;
  j["strategy"] = mf.strategy;
  j["entities"] = mf.counts.entities;
  j["relations"] = mf.counts.relations;
  j["triples"] = mf.counts.triples;
  j["plan"] = mf.plan_file;
  j["partitions"] = nlohmann::ordered_json::array();
  for (const auto& s : mf.shards) {
    j["partitions"].push_back({{"index", s.index},
                               {"graph", s.graph_file},
                               {"map", s.map_file},
                               {"triples", s.triples},
                               {"subjects", s.subjects}});
  }
  const auto text = j.dump(2) + "\n";
  detail::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline PartitionManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IntegrityError("cannot open " + path.string());
  PartitionManifest mf;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format") != "kghop-partitions") throw FormatError("not a partition manifest");
    if (j.at("version").get<int>() != kFormatVersion) throw VersionError("unsupported manifest version");
    mf.m = j.at("m").get<std::size_t>();
    mf.strategy = j.at("strategy").get<std::string>();
    mf.counts = {j.at("entities").get<std::uint64_t>(), j.at("relations").get<std::uint64_t>(),
                 j.at("triples").get<std::uint64_t>()};
    mf.plan_file = j.at("plan").get<std::string>();
    for (const auto& p : j.at("partitions")) {
      mf.shards.push_back({p.at("index").get<std::size_t>(), p.at("graph").get<std::string>(),
                           p.at("map").get<std::string>(), p.at("triples").get<std::uint64_t>(),
                           p.at("subjects").get<std::uint64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
  if (mf.shards.size() != mf.m) throw FormatError("manifest lists " + std::to_string(mf.shards.size()) + " shards, m = " + std::to_string(mf.m));
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < mf.shards.size(); ++i) {
    if (mf.shards[i].index != i) throw FormatError("manifest shards out of order");
    total += mf.shards[i].triples;
  }
  if (total != mf.counts.triples) throw FormatError("per-partition triple counts do not sum to |T|");
  return mf;
}

// Reads shards from a partition directory on every load; the engine's cache
// decides when that happens.
class DiskSubgraphStore final : public SubgraphStore {
 public:
  DiskSubgraphStore(fs::path dir, PartitionManifest manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}

  std::size_t partition_count() const override { return manifest_.m; }

  std::shared_ptr<const Subgraph> load(std::size_t index) const override {
    if (index >= manifest_.shards.size()) throw IntegrityError("partition " + std::to_string(index) + " is not in the manifest");
    const auto& entry = manifest_.shards[index];
    const auto graph_path = dir_ / entry.graph_file;
    const auto map_path = dir_ / entry.map_file;
    for (const auto& p : {graph_path, map_path}) {
      if (!fs::exists(p)) throw IntegrityError("partition " + std::to_string(index) + ": missing " + p.string());
    }
    auto sg = std::make_shared<Subgraph>(decode_subgraph(detail::read_file(graph_path), detail::read_file(map_path)));
    if (sg->index != index || sg->graph.num_triples() != entry.triples) {
      throw IntegrityError("partition " + std::to_string(index) + ": shard does not match the manifest");
    }
    return sg;
  }

  const PartitionManifest& manifest() const noexcept { return manifest_; }

 private:
  fs::path dir_;
  PartitionManifest manifest_;
};

inline void save_partitioned(const fs::path& dir, const PartitionPlan& plan, std::span<const Subgraph> subgraphs,
                             PartitionStrategy strategy, GraphCounts counts, const Dictionary* entities = nullptr,
                             const Dictionary* relations = nullptr) {
  fs::create_directories(dir);
  PartitionManifest mf;
  mf.m = plan.m;
  mf.strategy = std::string(to_string(strategy));
  mf.counts = counts;
  detail::write_file(dir / mf.plan_file, encode_plan(plan));
  for (const auto& sg : subgraphs) {
    ShardEntry entry{sg.index, shard_stem(sg.index) + ".lkg", shard_stem(sg.index) + ".lkm", sg.graph.num_triples(),
                     sg.num_subjects};
    save_graph(sg.graph, dir / entry.graph_file);
    detail::write_file(dir / entry.map_file, encode_shard_map(sg));
    mf.shards.push_back(std::move(entry));
  }
  if (entities != nullptr) save_labels(*entities, dir / "entities.txt");
  if (relations != nullptr) save_labels(*relations, dir / "relations.txt");
  save_manifest(mf, dir / "manifest.json");
}

// Rebuilds the plan from P and the manifest's per-shard counts.
inline PartitionPlan load_plan(const fs::path& dir, const PartitionManifest& mf) {
  auto [m, assignment] = decode_plan(detail::read_file(dir / mf.plan_file));
  if (m != mf.m || assignment.size() != mf.counts.entities) throw FormatError("plan does not match the manifest");
  PartitionPlan plan;
  plan.m = m;
  plan.assignment = std::move(assignment);
  plan.loads.resize(m);
  plan.subjects.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    plan.loads[i] = mf.shards[i].triples;
    plan.subjects[i] = mf.shards[i].subjects;
  }
  return plan;
}

inline PartitionedGraph open_partitioned(const fs::path& dir, std::size_t cache_capacity) {
  auto mf = load_manifest(dir / "manifest.json");
  auto plan = load_plan(dir, mf);
  auto store = std::make_shared<DiskSubgraphStore>(dir, std::move(mf));
  return PartitionedGraph(std::move(plan), std::move(store), cache_capacity);
}

}  // namespace kghop

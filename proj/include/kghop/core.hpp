#pragma once
// Dictionaries and triple ingestion.
//
// Input is UTF-8 TSV, one (subject, relation, object) triple per line.
// Labels get dense ids in first-seen order; repeated triples are dropped so
// every surviving triple owns exactly one incidence column.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kghop/error.hpp"
#include "kghop/ids.hpp"
#include "kghop/vector.hpp"

namespace kghop {

// Bijection label <-> dense id, ids contiguous from 0.
class Dictionary {
 public:
  std::uint32_t intern(std::string_view label) {
    auto it = forward_.find(std::string(label));
    if (it != forward_.end()) return it->second;
    if (reverse_.size() >= kMaxIdSpace) throw InvalidArgument("dictionary is full");
    const auto id = static_cast<std::uint32_t>(reverse_.size());
    reverse_.emplace_back(label);
    forward_.emplace(reverse_.back(), id);
    return id;
  }

  std::optional<std::uint32_t> find(std::string_view label) const {
    auto it = forward_.find(std::string(label));
    if (it == forward_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label(std::uint32_t id) const {
    if (id >= reverse_.size()) throw InvalidArgument("dictionary id " + std::to_string(id) + " out of range");
    return reverse_[id];
  }

  std::size_t size() const noexcept { return reverse_.size(); }
  std::span<const std::string> labels() const noexcept { return reverse_; }

  static Dictionary from_labels(std::vector<std::string> labels) {
    Dictionary d;
    d.reverse_ = std::move(labels);
    d.forward_.reserve(d.reverse_.size());
    for (std::uint32_t i = 0; i < d.reverse_.size(); ++i) {
      if (!d.forward_.emplace(d.reverse_[i], i).second) {
        throw FormatError("duplicate dictionary label '" + d.reverse_[i] + "' at id " + std::to_string(i));
      }
    }
    return d;
  }

  friend bool operator==(const Dictionary& a, const Dictionary& b) { return a.reverse_ == b.reverse_; }

 private:
  std::unordered_map<std::string, std::uint32_t> forward_;
  std::vector<std::string> reverse_;
};

struct TripleTable {
  Dictionary entities;
  Dictionary relations;
  std::vector<Triple> triples;

  GraphCounts counts() const {
    return {entities.size(), relations.size(), triples.size()};
  }
};

namespace detail {

inline std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail

// Reads TSV triples. Blank lines are skipped; any other line must have
// exactly three non-empty tab-separated fields.
inline TripleTable ingest_triples(std::istream& in) {
  TripleTable table;
  std::unordered_set<Triple> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim_cr(raw);
    if (line.empty()) continue;

    std::string_view fields[3];
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      const auto field = line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start);
      if (n < 3) fields[n] = field;
      ++n;
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (n != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, found " + std::to_string(n));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(line_no, "empty field");
    }

    Triple t{EntityId{table.entities.intern(fields[0])},
             RelationId{table.relations.intern(fields[1])},
             EntityId{table.entities.intern(fields[2])}};
    if (seen.insert(t).second) table.triples.push_back(t);
  }
  if (table.triples.empty()) throw ParseError(0, "input contains no triples");
  return table;
}

inline void write_triples(std::ostream& out, const TripleTable& table) {
  for (const auto& t : table.triples) {
    out << table.entities.label(t.subject.value) << '\t'
        << table.relations.label(t.relation.value) << '\t'
        << table.entities.label(t.object.value) << '\n';
  }
}

struct EntityLookup {
  EntityVector active;
  std::vector<std::string> unknown;
};

// Unknown labels never fail the lookup; they are reported back.
inline EntityLookup lookup_entities(std::span<const std::string> labels, const Dictionary& dict) {
  EntityLookup result;
  std::vector<EntityId> ids;
  for (const auto& label : labels) {
    if (auto id = dict.find(label)) {
      ids.push_back(EntityId{*id});
    } else {
      result.unknown.push_back(label);
    }
  }
  result.active = EntityVector::from_unsorted(std::move(ids));
  return result;
}

}  // namespace kghop

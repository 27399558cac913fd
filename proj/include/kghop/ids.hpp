#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace kghop {

// Dense index into one of the graph's id spaces. The tag keeps entity,
// relation and triple ids from mixing.
template <typename Tag>
struct Id {
  using value_type = std::uint32_t;
  value_type value = 0;

  constexpr Id() = default;
  constexpr explicit Id(value_type v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
};

struct EntityTag {};
struct RelationTag {};
struct TripleTag {};

using EntityId = Id<EntityTag>;
using RelationId = Id<RelationTag>;
using TripleId = Id<TripleTag>;

// Largest count any in-memory id space may reach.
inline constexpr std::uint64_t kMaxIdSpace =
    std::numeric_limits<Id<EntityTag>::value_type>::max();

struct Triple {
  EntityId subject;
  RelationId relation;
  EntityId object;

  friend constexpr auto operator<=>(const Triple&, const Triple&) = default;
};

struct GraphCounts {
  std::uint64_t entities = 0;
  std::uint64_t relations = 0;
  std::uint64_t triples = 0;

  friend constexpr bool operator==(const GraphCounts&, const GraphCounts&) = default;
};

}  // namespace kghop

template <typename Tag>
struct std::hash<kghop::Id<Tag>> {
  std::size_t operator()(kghop::Id<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

template <>
struct std::hash<kghop::Triple> {
  std::size_t operator()(const kghop::Triple& t) const noexcept {
    std::uint64_t h = t.subject.value;
    h = h * 0x9E3779B97F4A7C15ull + t.relation.value;
    h = h * 0x9E3779B97F4A7C15ull + t.object.value;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

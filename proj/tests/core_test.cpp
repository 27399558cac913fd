#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

namespace kghop {
namespace {

using testing::tiny_table;
using testing::values;

TEST(Ingest, AssignsIdsInFirstSeenOrder) {
  const auto t = tiny_table();
  EXPECT_EQ(t.entities.size(), 3u);
  EXPECT_EQ(t.relations.size(), 3u);
  EXPECT_EQ(t.triples.size(), 4u);
  EXPECT_EQ(t.entities.find("A"), 0u);
  EXPECT_EQ(t.entities.find("B"), 1u);
  EXPECT_EQ(t.entities.find("C"), 2u);
  EXPECT_EQ(t.relations.label(2), "r3");
}

TEST(Ingest, DropsDuplicateTriples) {
  std::istringstream in("A\tr1\tB\nA\tr1\tB\n");
  const auto t = ingest_triples(in);
  EXPECT_EQ(t.triples.size(), 1u);
}

TEST(Ingest, ShortLineNamesItsLineNumber) {
  std::istringstream in("A\tr1\tB\nA\tr1\n");
  try {
    ingest_triples(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Ingest, RejectsExtraFieldsAndEmptyFields) {
  std::istringstream extra("A\tr\tB\tD\n");
  EXPECT_THROW(ingest_triples(extra), ParseError);
  std::istringstream empty_field("A\t\tB\n");
  EXPECT_THROW(ingest_triples(empty_field), ParseError);
}

TEST(Ingest, EmptyInputIsAnError) {
  std::istringstream in("");
  EXPECT_THROW(ingest_triples(in), ParseError);
  std::istringstream blank("\n\n");
  EXPECT_THROW(ingest_triples(blank), ParseError);
}

TEST(Ingest, AcceptsSelfLoopsAndCrlf) {
  std::istringstream in("A\tr\tA\r\n");
  const auto t = ingest_triples(in);
  ASSERT_EQ(t.triples.size(), 1u);
  EXPECT_EQ(t.triples[0].subject, t.triples[0].object);
  EXPECT_EQ(t.relations.label(0), "r");
}

TEST(Ingest, ReserializeRoundTripsAndIsDeterministic) {
  std::istringstream in("x\tp\ty\ny\tq\tz\nx\tp\ty\nz\tp\tx\n");
  const auto first = ingest_triples(in);
  std::ostringstream out;
  write_triples(out, first);
  std::istringstream again(out.str());
  const auto second = ingest_triples(again);
  EXPECT_EQ(first.triples, second.triples);
  EXPECT_EQ(first.entities, second.entities);
  EXPECT_EQ(first.relations, second.relations);
  EXPECT_EQ(out.str(), "x\tp\ty\ny\tq\tz\nz\tp\tx\n");
}

TEST(Lookup, KnownLabels) {
  const auto t = tiny_table();
  const std::vector<std::string> labels{"A", "C"};
  const auto r = lookup_entities(labels, t.entities);
  EXPECT_EQ(values(r.active), (std::vector<std::uint32_t>{0, 2}));
  EXPECT_TRUE(r.unknown.empty());
}

TEST(Lookup, EmptyQuery) {
  const auto t = tiny_table();
  const auto r = lookup_entities({}, t.entities);
  EXPECT_TRUE(r.active.empty());
}

TEST(Lookup, UnknownLabelsAreReportedNotFatal) {
  const auto t = tiny_table();
  const std::vector<std::string> labels{"A", "ZZZ"};
  const auto r = lookup_entities(labels, t.entities);
  EXPECT_EQ(values(r.active), (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(r.unknown, (std::vector<std::string>{"ZZZ"}));
}

TEST(Dictionary, BijectiveAndContiguous) {
  Dictionary d;
  EXPECT_EQ(d.intern("a"), 0u);
  EXPECT_EQ(d.intern("b"), 1u);
  EXPECT_EQ(d.intern("a"), 0u);
  for (std::uint32_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.find(d.label(i)), i);
  EXPECT_THROW(Dictionary::from_labels({"x", "x"}), FormatError);
  EXPECT_THROW(d.label(7), InvalidArgument);
}

}  // namespace
}  // namespace kghop

#include "mlncc/graph.hpp"

#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace mlncc {
namespace {

using testing::make_graph;
using testing::random_graph;

ParsedEdgeList parse(const std::string& text, std::optional<vertex_t> hint = std::nullopt) {
  std::istringstream in(text);
  return parse_edge_list(in, hint);
}

std::string write(const UndirectedGraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

void expect_invariants(const UndirectedGraph& g) {
  std::size_t total = 0;
  for (vertex_t u = 0; u < g.num_vertices(); ++u) {
    auto nb = g.neighbors(u);
    total += nb.size();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      ASSERT_LT(nb[i], g.num_vertices());
      ASSERT_NE(nb[i], u);
      if (i > 0) {
        ASSERT_LT(nb[i - 1], nb[i]);
      }
      ASSERT_TRUE(g.has_edge(nb[i], u));
    }
  }
  EXPECT_EQ(total, 2 * g.num_edges());
}

TEST(ParseEdgeList, CommaSeparatedWithHint) {
  auto r = parse("0,1\n1,2\n", 3);
  EXPECT_EQ(r.graph.num_vertices(), 3u);
  EXPECT_EQ(r.graph.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(r.stats.dropped(), 0u);
}

TEST(ParseEdgeList, SelfLoopDroppedAndCounted) {
  auto r = parse("2 2\n", 3);
  EXPECT_EQ(r.graph.num_vertices(), 3u);
  EXPECT_EQ(r.graph.num_edges(), 0u);
  EXPECT_EQ(r.stats.self_loops, 1u);
}

TEST(ParseEdgeList, MixedSeparatorsDeduplicate) {
  auto r = parse("0\t1\n0,1\n1 0\n");
  EXPECT_EQ(r.graph.edges(), (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(r.stats.duplicates, 2u);
}

TEST(ParseEdgeList, DeclaredCountKeepsIsolatedVertices) {
  auto r = parse("# generated\n# n=10\n0 1\n\n   3\t4\r\n");
  EXPECT_EQ(r.graph.num_vertices(), 10u);
  EXPECT_EQ(r.graph.num_edges(), 2u);
  EXPECT_EQ(r.graph.degree(9), 0u);
}

TEST(ParseEdgeList, VertexCountIsLargestOfSources) {
  EXPECT_EQ(parse("0 7\n", 3).graph.num_vertices(), 8u);
  EXPECT_EQ(parse("0 1\n", 30).graph.num_vertices(), 30u);
  EXPECT_EQ(parse("# n=5\n0 1\n", 3).graph.num_vertices(), 5u);
}

TEST(ParseEdgeList, MalformedTokenReportsLine) {
  try {
    parse("0 1\n1 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("0 1 2\n"), ParseError);
  EXPECT_THROW(parse("5\n"), ParseError);
  EXPECT_THROW(parse("-1 2\n"), ParseError);
  EXPECT_THROW(parse("1.5 2\n"), ParseError);
}

TEST(ParseEdgeList, IdBeyondDeclaredCountIsBoundsError) {
  EXPECT_THROW(parse("# n=3\n0 3\n"), BoundsError);
}

TEST(ParseEdgeList, NothingDeterminesVertexCount) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("# just a comment\n"), ParseError);
  EXPECT_EQ(parse("", 4).graph.num_vertices(), 4u);
}

TEST(WriteEdgeList, CanonicalOrdering) {
  auto g = make_graph(3, {{1, 2}, {0, 1}});
  EXPECT_EQ(write(g), "# n=3\n0\t1\n1\t2\n");
}

TEST(WriteEdgeList, EmptyGraph) {
  EXPECT_EQ(write(UndirectedGraph(2)), "# n=2\n");
}

TEST(WriteEdgeList, RoundTripRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto n = static_cast<vertex_t>(1 + rng() % 60);
    auto g = random_graph(n, 0.02 + 0.5 * (rng() % 100) / 100.0, rng);
    auto back = parse(write(g)).graph;
    ASSERT_EQ(back, g);
  }
}

TEST(UndirectedGraph, FromEdgesInvariants) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(40, 0.2, rng);
    expect_invariants(g);
  }
  EXPECT_THROW(make_graph(3, {{0, 3}}), BoundsError);
}

TEST(UndirectedGraph, WithVertexCountPadsIsolated) {
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  auto h = g.with_vertex_count(5);
  EXPECT_EQ(h.num_vertices(), 5u);
  EXPECT_EQ(h.edges(), g.edges());
  EXPECT_EQ(h.degree(4), 0u);
  EXPECT_THROW(g.with_vertex_count(2), BoundsError);
}

TEST(AndAggregate, Intersection) {
  auto gx = make_graph(4, {{0, 1}, {1, 2}});
  auto gy = make_graph(4, {{1, 2}, {2, 3}});
  auto g = and_aggregate(gx, gy);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{1, 2}}));
}

TEST(AndAggregate, IdempotentAndDisjoint) {
  auto g = make_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  EXPECT_EQ(and_aggregate(g, g), g);
  auto disjoint = and_aggregate(make_graph(4, {{0, 1}}), make_graph(4, {{2, 3}}));
  EXPECT_EQ(disjoint.num_edges(), 0u);
  EXPECT_EQ(disjoint.num_vertices(), 4u);
}

TEST(AndAggregate, DimensionMismatch) {
  EXPECT_THROW(and_aggregate(UndirectedGraph(3), UndirectedGraph(4)), DimensionError);
  EXPECT_THROW(or_aggregate(UndirectedGraph(3), UndirectedGraph(4)), DimensionError);
}

TEST(OrAggregate, UnionAndIdentity) {
  auto g = or_aggregate(make_graph(3, {{0, 1}}), make_graph(3, {{1, 2}}));
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  auto h = make_graph(4, {{0, 3}, {1, 2}});
  EXPECT_EQ(or_aggregate(h, h), h);
  EXPECT_EQ(or_aggregate(UndirectedGraph(4), h), h);
}

TEST(Aggregation, AlgebraicProperties) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_graph(24, 0.3, rng);
    auto b = random_graph(24, 0.3, rng);
    auto c = random_graph(24, 0.3, rng);
    auto ab = and_aggregate(a, b);
    expect_invariants(ab);
    EXPECT_EQ(ab, and_aggregate(b, a));
    EXPECT_EQ(and_aggregate(ab, c), and_aggregate(a, and_aggregate(b, c)));
    EXPECT_EQ(or_aggregate(a, b), or_aggregate(b, a));
    EXPECT_EQ(or_aggregate(or_aggregate(a, b), c), or_aggregate(a, or_aggregate(b, c)));
    auto aob = or_aggregate(a, b);
    expect_invariants(aob);
    for (auto [u, v] : ab.edges()) {
      EXPECT_TRUE(a.has_edge(u, v));
      EXPECT_TRUE(b.has_edge(u, v));
    }
    for (auto [u, v] : a.edges()) EXPECT_TRUE(aob.has_edge(u, v));
    for (vertex_t u = 0; u < 24; ++u) EXPECT_LE(ab.degree(u), std::min(a.degree(u), b.degree(u)));
  }
}

TEST(HoMln, RequiresHomogeneousLayers) {
  EXPECT_THROW(HoMln({}), ParameterError);
  EXPECT_THROW(HoMln({UndirectedGraph(3), UndirectedGraph(4)}), DimensionError);
  HoMln mln({UndirectedGraph(3), UndirectedGraph(3)});
  EXPECT_EQ(mln.labels(), (std::vector<std::string>{"L1", "L2"}));
  EXPECT_THROW(mln.layer(2), BoundsError);
}

}  // namespace
}  // namespace mlncc

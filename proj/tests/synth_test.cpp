#include "mlncc/synth.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gtest/gtest.h"
#include "mlncc/layer_analysis.hpp"

namespace mlncc {
namespace {

constexpr PowerLaw kFlat{0.25, 0.25, 0.25, 0.25};

double mean_degree(const UndirectedGraph& g) {
  return 2.0 * static_cast<double>(g.num_edges()) / g.num_vertices();
}

std::size_t max_degree(const UndirectedGraph& g) {
  std::size_t best = 0;
  for (vertex_t u = 0; u < g.num_vertices(); ++u) best = std::max(best, g.degree(u));
  return best;
}

bool connected(const UndirectedGraph& g) {
  return g.num_vertices() == 0 || bfs_distance_sum(g, 0).reachable_count == g.num_vertices();
}

std::string serialize(const UndirectedGraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

TEST(Rng, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7u);
  }
}

TEST(GenRmat, ExactCountAndReproducible) {
  auto g = gen_rmat(8, 5, kFlat, 42);
  EXPECT_EQ(g.num_vertices(), 8u);
  EXPECT_EQ(g.num_edges(), 5u);
  EXPECT_EQ(gen_rmat(8, 5, kFlat, 42), g);
  EXPECT_NE(gen_rmat(64, 100, kFlat, 43), gen_rmat(64, 100, kFlat, 42));
}

TEST(GenRmat, SkewedQuadrantsGiveHeavyTail) {
  auto g = gen_rmat(4096, 20000, PowerLaw{0.57, 0.19, 0.19, 0.05}, 7);
  EXPECT_EQ(g.num_edges(), 20000u);
  EXPECT_GE(static_cast<double>(max_degree(g)), 5.0 * mean_degree(g));
  // the uniform baseline stays concentrated
  auto u = gen_uniform(4096, 20000, 7);
  EXPECT_LT(static_cast<double>(max_degree(u)), 5.0 * mean_degree(u));
}

TEST(GenRmat, SaturationIsComplete) {
  auto g = gen_rmat(5, 10, kFlat, 1);
  EXPECT_EQ(g.num_edges(), 10u);
  for (vertex_t u = 0; u < 5; ++u) EXPECT_EQ(g.degree(u), 4u);
}

TEST(GenRmat, NonPowerOfTwoVertexCount) {
  auto g = gen_rmat(1000, 3000, PowerLaw{}, 3);
  EXPECT_EQ(g.num_vertices(), 1000u);
  EXPECT_EQ(g.num_edges(), 3000u);
}

TEST(GenRmat, Errors) {
  EXPECT_THROW(gen_rmat(5, 11, kFlat, 1), CapacityError);
  EXPECT_THROW(gen_rmat(8, 4, PowerLaw{0.5, 0.2, 0.2, 0.2}, 1), ParameterError);
  EXPECT_THROW(gen_rmat(8, 4, PowerLaw{1.2, -0.2, 0.0, 0.0}, 1), ParameterError);
  EXPECT_THROW(gen_rmat(1, 1, kFlat, 1), CapacityError);
}

TEST(GenUniform, DegreesConcentrate) {
  auto g = gen_uniform(1000, 10000, 99);
  EXPECT_EQ(g.num_edges(), 10000u);
  const double mean = mean_degree(g);
  double var = 0.0;
  for (vertex_t u = 0; u < 1000; ++u) var += std::pow(static_cast<double>(g.degree(u)) - mean, 2);
  const double sd = std::sqrt(var / 1000);
  EXPECT_LT(sd / mean, 0.4);
}

TEST(GenUniform, ZeroDenseAndDeterministic) {
  EXPECT_EQ(gen_uniform(10, 0, 1).num_edges(), 0u);
  EXPECT_EQ(gen_uniform(300, 2000, 5), gen_uniform(300, 2000, 5));
  EXPECT_EQ(gen_uniform(20, 180, 5).num_edges(), 180u);
  EXPECT_EQ(gen_uniform(20, 190, 5).num_edges(), 190u);
  EXPECT_THROW(gen_uniform(20, 191, 5), CapacityError);
}

TEST(GenMln, OverlayOnly) {
  GenSpec spec;
  spec.n = 4;
  spec.base_edges = 0;
  auto mln = gen_mln(spec);
  const std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(mln.layer(0).edges(), path);
  EXPECT_EQ(mln.layer(1).edges(), path);
  EXPECT_EQ(and_aggregate(mln.layer(0), mln.layer(1)).edges(), path);
}

TEST(GenMln, OverlayMakesEveryLayerConnected) {
  GenSpec spec;
  spec.n = 2000;
  spec.base_edges = 3000;
  spec.p1 = 70;
  spec.p2 = 30;
  spec.seed = 12;
  auto mln = gen_mln(spec);
  EXPECT_TRUE(connected(mln.layer(0)));
  EXPECT_TRUE(connected(mln.layer(1)));
  EXPECT_TRUE(connected(and_aggregate(mln.layer(0), mln.layer(1))));
  // random edges plus the path, minus the few random edges that hit it
  EXPECT_LE(mln.layer(0).num_edges(), 2100u + 1999u);
  EXPECT_GE(mln.layer(0).num_edges(), 2100u + 1999u - 50u);

  spec.path_overlay = false;
  auto bare = gen_mln(spec);
  EXPECT_EQ(bare.layer(0).num_edges(), 2100u);
  EXPECT_EQ(bare.layer(1).num_edges(), 900u);
}

TEST(GenMln, IndependentLayersRarelyShareEdges) {
  GenSpec spec;
  spec.n = 1000;
  spec.base_edges = 20000;
  spec.dist1 = Uniform{};
  spec.dist2 = Uniform{};
  spec.path_overlay = false;
  const double expected = 10000.0 * 10000.0 / (1000.0 * 999.0 / 2.0);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    spec.seed = seed;
    auto mln = gen_mln(spec);
    total += static_cast<double>(and_aggregate(mln.layer(0), mln.layer(1)).num_edges());
  }
  EXPECT_NEAR(total / 10.0, expected, 0.1 * expected);
}

TEST(GenMln, Deterministic) {
  GenSpec spec;
  spec.n = 500;
  spec.base_edges = 2500;
  spec.p1 = 60;
  spec.p2 = 40;
  spec.seed = 2718;
  auto a = gen_mln(spec);
  auto b = gen_mln(spec);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(serialize(a.layer(i)), serialize(b.layer(i)));
}

TEST(GenSpecJson, ParseAndValidate) {
  auto spec = genspec_from_json(nlohmann::ordered_json::parse(R"({
    "n": 100, "base_edges": 500, "split": [70, 30],
    "dist1": {"type": "powerlaw", "a": 0.45, "b": 0.22, "c": 0.22, "d": 0.11},
    "dist2": "uniform", "path_overlay": false, "seed": 9})"));
  EXPECT_EQ(spec.n, 100u);
  EXPECT_EQ(spec.layer_edges(0), 350u);
  EXPECT_EQ(spec.layer_edges(1), 150u);
  EXPECT_EQ(std::get<PowerLaw>(spec.dist1).a, 0.45);
  EXPECT_TRUE(std::holds_alternative<Uniform>(spec.dist2));
  EXPECT_FALSE(spec.path_overlay);
  EXPECT_EQ(genspec_from_json(to_json(spec)), spec);

  auto bad = [](const char* text) { return genspec_from_json(nlohmann::ordered_json::parse(text)); };
  EXPECT_THROW(bad(R"({"n": 10, "split": [70, 40]})"), ParameterError);
  EXPECT_THROW(bad(R"({"n": 10, "split": [100, 0]})"), ParameterError);
  EXPECT_THROW(bad(R"({"n": -5})"), ParameterError);
  EXPECT_THROW(bad(R"({"n": 10, "dist1": "lognormal"})"), ParameterError);
  EXPECT_THROW(bad(R"({"n": 10, "dist1": {"type": "powerlaw", "a": 0.9}})"), ParameterError);
  EXPECT_THROW(bad(R"({"base_edges": 10})"), ParameterError);
}

}  // namespace
}  // namespace mlncc

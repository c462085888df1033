// Composition must be usable with nothing but layer summaries. This file
// includes the composition header alone; pulling in the graph type here is
// a build failure.
#include "mlncc/composition.hpp"

#ifdef MLNCC_GRAPH_HPP
#error "composition.hpp must not depend on the graph representation"
#endif

#include <type_traits>

#include "gtest/gtest.h"

namespace mlncc {
namespace {

static_assert(std::is_invocable_r_v<CompositionResult, decltype(&compose_naive), const LayerSummary&,
                                     const LayerSummary&>);
static_assert(std::is_invocable_r_v<CompositionResult, decltype(&compose_cc1), const LayerSummary&,
                                     const LayerSummary&>);
static_assert(std::is_invocable_r_v<CompositionResult, decltype(&compose_cc2), const LayerSummary&,
                                     const LayerSummary&, const Selection&>);

TEST(Decoupling, ComposesFromSummaryDocumentsAlone) {
  // Star on 5 vertices vs. a path on 5 vertices, written as summary JSON.
  const char* star = R"({"version":1,"n":5,"deg":[4,1,1,1,1],"sum_dist":[4,7,7,7,7],
    "closeness":[1.0,0.5714285714285714,0.5714285714285714,0.5714285714285714,0.5714285714285714],
    "avg_closeness":0.6571428571428571,"cc_nodes":[0],"cc_neighborhoods":{"0":[1,2,3,4]}})";
  const char* path = R"({"version":1,"n":5,"deg":[1,2,2,2,1],"sum_dist":[10,7,6,7,10],
    "closeness":[0.4,0.5714285714285714,0.6666666666666666,0.5714285714285714,0.4],
    "avg_closeness":0.5219047619047619,"cc_nodes":[1,2,3],
    "cc_neighborhoods":{"1":[0,2],"2":[1,3],"3":[2,4]}})";
  auto sx = summary_from_json(nlohmann::ordered_json::parse(star));
  auto sy = summary_from_json(nlohmann::ordered_json::parse(path));
  EXPECT_TRUE(compose_naive(sx, sy).est_cc_nodes.empty());
  EXPECT_TRUE(compose_cc1(sx, sy).est_cc_nodes.empty());
  // est sums (10,7,7,7,10)
  EXPECT_EQ(compose_cc2(sx, sy).est_cc_nodes, (std::vector<vertex_t>{1, 2, 3}));
}

}  // namespace
}  // namespace mlncc

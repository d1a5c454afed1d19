#include <gtest/gtest.h>

#include <map>

#include "cliquefactor/approx.hpp"
#include "cliquefactor/constructions.hpp"
#include "cliquefactor/errors.hpp"

namespace cf = cliquefactor;

TEST(Constructions, ExtremalCodegreeFormula) {
  // ceil((t-k+1)n/t) - 1
  EXPECT_EQ(cf::extremal_codegree(3, 2, 3), 1u);
  EXPECT_EQ(cf::extremal_codegree(3, 2, 6), 3u);
  EXPECT_EQ(cf::extremal_codegree(4, 2, 4), 2u);
  EXPECT_EQ(cf::extremal_codegree(4, 3, 4), 1u);
}

TEST(Constructions, ExtremalInstanceHasThatCodegree) {
  for (auto [t, k, n] : std::vector<std::array<std::uint32_t, 3>>{{3, 2, 3}, {3, 2, 6}, {4, 2, 4}, {4, 3, 4}}) {
    const auto h = cf::extremal_fractional(t, k, n);
    EXPECT_EQ(cf::min_codegree(h, k - 1).overall, cf::extremal_codegree(t, k, n));
    // Every edge meets W.
    const auto w = cf::extremal_codegree(t, k, n);
    for (std::size_t i = 0; i < h.edge_count(); ++i) {
      auto e = h.edge(i);
      EXPECT_TRUE(std::any_of(e.begin(), e.end(), [&](cf::Vertex v) { return h.index_in_class(v) < w; }));
    }
  }
}

TEST(Constructions, CompleteCounts) {
  EXPECT_EQ(cf::complete_partite(4, 3, 2).edge_count(), 4u * 8u);
  EXPECT_THROW(cf::complete_partite(4, 3, 100, 1000), cf::CapExceeded);
}

TEST(Constructions, RandomIsSeeded) {
  const auto a = cf::random_partite(3, 2, 5, 0.5, 9);
  const auto b = cf::random_partite(3, 2, 5, 0.5, 9);
  const auto c = cf::random_partite(3, 2, 5, 0.5, 10);
  EXPECT_EQ(a.to_raw().edges, b.to_raw().edges);
  EXPECT_NE(a.to_raw().edges, c.to_raw().edges);
}

TEST(Constructions, RepairReachesTarget) {
  for (cf::Seed seed = 0; seed < 5; ++seed) {
    const auto r = cf::random_with_min_codegree(3, 2, 20, 17, seed);
    EXPECT_GE(cf::min_codegree(r.graph, 1).overall, 17u);
    const auto r3 = cf::random_with_min_codegree(4, 3, 5, 3, seed);
    EXPECT_GE(cf::min_codegree(r3.graph, 2).overall, 3u);
  }
}

TEST(Constructions, GeneratorSpecChecks) {
  cf::GeneratorSpec spec;
  spec.t = 2;
  spec.k = 3;
  EXPECT_THROW(spec.check(), std::invalid_argument);
  spec = {};
  spec.mode = cf::GeneratorSpec::Mode::MinCodegreeTarget;
  spec.n = 3;
  spec.target = 4;
  EXPECT_THROW(spec.check(), std::invalid_argument);
}

TEST(Constructions, NearRegularTGraph) {
  const auto g = cf::near_regular_tgraph(3, 100, 20, 2, 1);
  const auto st = cf::regularity_stats(g);
  EXPECT_LE(st.max_pair_degree, 2u);
  EXPECT_LE(st.max_degree, 20u);
  EXPECT_GT(st.mean_degree, 17.0);
  for (const auto& e : g.edges) {
    ASSERT_EQ(e.size(), 3u);
    EXPECT_LT(e[0], 100u);
    EXPECT_GE(e[1], 100u);
    EXPECT_GE(e[2], 200u);
  }
}

TEST(Constructions, GeneralGraphs) {
  const auto c = cf::complete_general(6, 3);
  EXPECT_EQ(c.edge_count(), 20u);
  EXPECT_EQ(c.min_degree(2), 4u);
  const auto r = cf::random_general_with_min_codegree(12, 3, 7, 4);
  EXPECT_GE(r.min_degree(2), 7u);
}

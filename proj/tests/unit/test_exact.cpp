#include <gtest/gtest.h>

#include <functional>
#include <numeric>

#include "cliquefactor/constructions.hpp"
#include "cliquefactor/errors.hpp"
#include "cliquefactor/exact.hpp"
#include "oracles.hpp"

namespace cf = cliquefactor;

namespace {

// Instance number `mask` over the 12 legal pairs of t=3, k=2, n=2.
cf::PartiteHypergraph small_instance(std::uint32_t mask) {
  std::vector<std::vector<cf::Vertex>> edges;
  int bit = 0;
  for (cf::Vertex a = 0; a < 6; ++a) {
    for (cf::Vertex b = a + 1; b < 6; ++b) {
      if (a / 2 == b / 2) continue;
      if (mask >> bit & 1) edges.push_back({a, b});
      ++bit;
    }
  }
  return cf::PartiteHypergraph(3, 2, {2, 2, 2}, std::move(edges));
}

// Perfect factors of a 6-vertex tripartite graph: complementary triangle pairs.
std::uint64_t oracle_factors(const cf::PartiteHypergraph& h) {
  const auto edges = oracle::edge_set(h);
  std::uint64_t count = 0;
  for (cf::Vertex b = 2; b < 4; ++b) {
    for (cf::Vertex c = 4; c < 6; ++c) {
      const oracle::Set first = {0, b, c};
      const oracle::Set second = {1, b == 2 ? 3u : 2u, c == 4 ? 5u : 4u};
      count += oracle::spans_clique(edges, 2, first) && oracle::spans_clique(edges, 2, second);
    }
  }
  return count;
}

}  // namespace

TEST(Exact, K222HasFourFactors) {
  const auto h = cf::complete_partite(3, 2, 2);
  EXPECT_EQ(cf::count_perfect_factors(h, 100).count, 4u);
  EXPECT_EQ(oracle_factors(h), 4u);
}

TEST(Exact, AllSmallInstancesAgreeWithExhaustion) {
  for (std::uint32_t mask = 0; mask < 4096; ++mask) {
    const auto h = small_instance(mask);
    const auto expected = oracle_factors(h);
    const auto found = cf::find_perfect_factor(h);
    ASSERT_EQ(found.status == cf::SearchStatus::Found, expected > 0) << mask;
    if (expected > 0) {
      const auto rep = cf::verify_matching(h, found.matching);
      ASSERT_TRUE(rep.valid && rep.perfect) << mask;
    }
    ASSERT_EQ(cf::count_perfect_factors(h, 1000).count, expected) << mask;
  }
}

TEST(Exact, CountsMatchOracleOnLargerInstances) {
  for (cf::Seed seed = 0; seed < 10; ++seed) {
    const auto h = cf::random_partite(3, 2, 4, 0.75, seed);
    std::vector<cf::Vertex> all(h.vertex_count());
    std::iota(all.begin(), all.end(), 0u);
    const auto expected = oracle::count_partitions(all, oracle::cliques(h));
    const auto got = cf::count_perfect_factors(h, 1'000'000);
    EXPECT_FALSE(got.capped);
    EXPECT_EQ(got.count, expected) << "seed " << seed;
  }
  EXPECT_EQ(cf::count_perfect_factors(cf::complete_partite(3, 2, 3), 1000).count, 36u);
  EXPECT_EQ(cf::count_perfect_factors(cf::complete_partite(3, 3, 2), 1000).count, 4u);
}

TEST(Exact, CountCapAndBudget) {
  const auto h = cf::complete_partite(3, 2, 4);  // 576 factors
  const auto capped = cf::count_perfect_factors(h, 10);
  EXPECT_TRUE(capped.capped);
  EXPECT_EQ(capped.count, 10u);
  cf::ExactOptions tiny;
  tiny.node_budget = 3;
  EXPECT_TRUE(cf::count_perfect_factors(h, 1000, tiny).budget_exhausted);
  EXPECT_THROW(cf::find_perfect_factor(cf::extremal_fractional(3, 2, 6), tiny), cf::BudgetExhausted);
}

TEST(Exact, ExactCoverPrimitive) {
  const std::vector<cf::Vertex> universe = {0, 1, 2, 3};
  const std::vector<cf::Clique> options = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  const auto r = cf::find_exact_cover(universe, options, 1000);
  ASSERT_EQ(r.status, cf::SearchStatus::Found);
  EXPECT_EQ(r.matching.cliques.size(), 2u);
  const std::vector<cf::Clique> odd = {{0, 1}, {1, 2}, {0, 2}};
  EXPECT_EQ(cf::find_exact_cover(std::vector<cf::Vertex>{0, 1, 2}, odd, 1000).status, cf::SearchStatus::None);
}

TEST(Exact, AlmostFactorIsMaximum) {
  for (cf::Seed seed = 0; seed < 10; ++seed) {
    const auto h = cf::random_partite(3, 2, 4, 0.5, seed);
    const auto r = cf::find_almost_factor(h, 0);
    ASSERT_TRUE(r.optimal);
    EXPECT_TRUE(cf::verify_matching(h, r.matching).valid);
    EXPECT_EQ(r.uncovered, h.vertex_count() - r.matching.covered());
    // Brute force: largest number of disjoint cliques.
    const auto cl = oracle::cliques(h);
    std::size_t best = 0;
    std::vector<bool> used(h.vertex_count());
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t size) {
      best = std::max(best, size);
      for (std::size_t i = from; i < cl.size(); ++i) {
        if (std::any_of(cl[i].begin(), cl[i].end(), [&](cf::Vertex v) { return used[v]; })) continue;
        for (auto v : cl[i]) used[v] = true;
        rec(i + 1, size + 1);
        for (auto v : cl[i]) used[v] = false;
      }
    };
    rec(0, 0);
    EXPECT_EQ(r.matching.cliques.size(), best) << "seed " << seed;
    EXPECT_EQ(r.meets_target, r.uncovered == 0);
  }
}

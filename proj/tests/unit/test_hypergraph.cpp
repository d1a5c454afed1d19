#include <gtest/gtest.h>

#include "cliquefactor/constructions.hpp"
#include "cliquefactor/hypergraph.hpp"
#include "oracles.hpp"

namespace cf = cliquefactor;

namespace {

cf::RawInstance raw_k222() {
  cf::RawInstance raw;
  raw.t = 3;
  raw.k = 2;
  raw.class_sizes = {2, 2, 2};
  return raw;
}

}  // namespace

TEST(Validate, ReportsEachViolationKind) {
  auto raw = raw_k222();
  raw.edges = {{{0, 0}, {1, 0}},   // fine
               {{0, 0}, {0, 1}},   // illegal: same class
               {{0, 0}, {5, 0}},   // bad class
               {{0, 0}, {1, 9}},   // bad index
               {{0, 0}},           // wrong size
               {{1, 0}, {0, 0}}};  // duplicate of the first
  const auto report = cf::validate(raw);
  std::vector<cf::Violation::Kind> kinds;
  std::vector<std::size_t> where;
  for (const auto& v : report.violations) {
    kinds.push_back(v.kind);
    where.push_back(v.edge);
  }
  using K = cf::Violation::Kind;
  EXPECT_EQ(kinds, (std::vector<K>{K::IllegalEdge, K::BadClassIndex, K::BadVertexIndex, K::WrongEdgeSize,
                                   K::DuplicateEdge}));
  EXPECT_EQ(where, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
}

TEST(Validate, BadParameters) {
  cf::RawInstance raw;
  raw.t = 2;
  raw.k = 3;
  raw.class_sizes = {1, 1};
  EXPECT_FALSE(cf::validate(raw).ok());
  EXPECT_THROW(cf::PartiteHypergraph::from_raw(raw), std::invalid_argument);
}

TEST(Hypergraph, FlatIdsFollowClassOrder) {
  const auto h = cf::complete_partite(3, 2, 4);
  EXPECT_EQ(h.vertex_count(), 12u);
  EXPECT_EQ(h.vertex(2, 1), 9u);
  EXPECT_EQ(h.id(9), (cf::VertexId{2, 1}));
  EXPECT_EQ(h.edge_count(), 3u * 16u);
  EXPECT_TRUE(h.balanced());
  EXPECT_EQ(h.n(), 4u);
  const auto raw = h.to_raw();
  EXPECT_EQ(cf::PartiteHypergraph::from_raw(raw).edge_count(), h.edge_count());
}

TEST(Hypergraph, CodegreeMatchesNaiveCount) {
  for (cf::Seed seed = 0; seed < 6; ++seed) {
    const std::uint32_t t = 3 + seed % 2, k = 2 + seed % 2;
    const auto h = cf::random_partite(t, k, 3, 0.6, seed);
    for (std::uint32_t l = 1; l < k; ++l) {
      const auto rep = cf::min_codegree(h, l);
      std::size_t naive_min = SIZE_MAX;
      for (const auto& I : cf::combinations(t, l)) {
        std::vector<oracle::Set> parts;
        for (auto c : I) parts.push_back(oracle::classes(h)[c]);
        for (const auto& T : oracle::all_transversals(h, parts)) {
          std::vector<std::uint32_t> rest;
          for (std::uint32_t c = 0; c < t; ++c) {
            if (!std::count(I.begin(), I.end(), c)) rest.push_back(c);
          }
          for (const auto& J : cf::combinations(static_cast<std::uint32_t>(rest.size()), k - l)) {
            std::vector<std::uint32_t> jc;
            for (auto j : J) jc.push_back(rest[j]);
            const auto expected = oracle::codegree(h, T, jc);
            EXPECT_EQ(cf::codegree(h, h.legal_set(T), jc), expected);
            naive_min = std::min(naive_min, expected);
          }
        }
      }
      EXPECT_EQ(rep.overall, naive_min) << "seed " << seed << " level " << l;
      EXPECT_EQ(cf::codegree(h, rep.witness_set, rep.witness_classes), rep.overall);
    }
  }
}

TEST(Hypergraph, CodegreeRejectsBadArguments) {
  const auto h = cf::complete_partite(3, 2, 2);
  EXPECT_THROW(cf::codegree(h, h.legal_set({0}), {0}), std::invalid_argument);
  EXPECT_THROW(cf::codegree(h, h.legal_set({0}), {1, 2}), std::invalid_argument);
  EXPECT_THROW(h.legal_set({0, 1}), std::invalid_argument);
}

TEST(Hypergraph, CliquesMatchBruteForce) {
  for (cf::Seed seed = 0; seed < 8; ++seed) {
    const std::uint32_t t = 3 + seed % 2, k = 2 + seed % 2;
    const auto h = cf::random_partite(t, k, 3, 0.7, seed);
    const auto got = cf::enumerate_cliques(h);
    EXPECT_FALSE(got.truncated);
    EXPECT_EQ(got.cliques, oracle::cliques(h)) << "seed " << seed;
    for (const auto& c : got.cliques) EXPECT_TRUE(cf::is_clique(h, c));
  }
}

TEST(Hypergraph, CliqueCapAndMask) {
  const auto h = cf::complete_partite(3, 2, 3);
  const auto capped = cf::enumerate_cliques(h, 5);
  EXPECT_TRUE(capped.truncated);
  EXPECT_EQ(capped.cliques.size(), 5u);
  cf::Bitset mask(h.vertex_count());
  for (cf::Vertex v : {0u, 1u, 3u, 6u, 7u}) mask.set(v);
  EXPECT_EQ(cf::enumerate_cliques(h, std::nullopt, &mask).cliques.size(), 4u);
}

TEST(Hypergraph, InducedKeepsEdgesInside) {
  const auto h = cf::random_partite(3, 2, 4, 0.5, 3);
  const std::vector<cf::Vertex> keep = {0, 2, 4, 5, 9, 11};
  const auto sub = h.induced(keep);
  EXPECT_EQ(sub.graph.class_sizes(), (std::vector<std::uint32_t>{2, 2, 2}));
  std::size_t inside = 0;
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    auto e = h.edge(i);
    inside += std::all_of(e.begin(), e.end(), [&](cf::Vertex v) { return std::binary_search(keep.begin(), keep.end(), v); });
  }
  EXPECT_EQ(sub.graph.edge_count(), inside);
  for (std::size_t i = 0; i < sub.graph.edge_count(); ++i) {
    std::vector<cf::Vertex> host;
    for (auto v : sub.graph.edge(i)) host.push_back(sub.to_host[v]);
    EXPECT_TRUE(h.has_edge(host));
  }
}

TEST(Hypergraph, VerifyMatchingCatchesProblems) {
  const auto h = cf::extremal_fractional(3, 2, 3);
  const auto cl = cf::enumerate_cliques(h).cliques;
  ASSERT_FALSE(cl.empty());
  cf::Matching one{{cl.front()}};
  auto rep = cf::verify_matching(h, one);
  EXPECT_TRUE(rep.valid);
  EXPECT_FALSE(rep.perfect);
  EXPECT_EQ(rep.covered, 3u);
  cf::Matching twice{{cl.front(), cl.front()}};
  EXPECT_FALSE(cf::verify_matching(h, twice).valid);
  cf::Matching fake{{{2, 5, 8}}};  // three vertices outside W: no edges among them
  EXPECT_FALSE(cf::verify_matching(h, fake).valid);
}

TEST(Hypergraph, Combinatorics) {
  EXPECT_EQ(cf::binomial(10, 3), 120u);
  EXPECT_EQ(cf::binomial(3, 5), 0u);
  EXPECT_EQ(cf::combinations(4, 2).size(), 6u);
  EXPECT_EQ(cf::combinations(4, 2).front(), (std::vector<std::uint32_t>{0, 1}));
}

TEST(Hypergraph, AuxiliaryGraphEdgesAreCliques) {
  const auto h = cf::random_partite(3, 2, 4, 0.7, 5);
  const auto g = cf::auxiliary_clique_graph(h);
  EXPECT_EQ(g.edges, cf::enumerate_cliques(h).cliques);
  EXPECT_EQ(g.vertex_count(), 12u);
}

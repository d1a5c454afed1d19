#include <gtest/gtest.h>

#include "cliquefactor/constructions.hpp"
#include "cliquefactor/exact.hpp"
#include "cliquefactor/pipeline.hpp"

namespace cf = cliquefactor;

TEST(Pipeline, LeftoverCapacityFallback) {
  // The formula is far below one t-set at these sizes.
  EXPECT_EQ(cf::default_leftover_capacity(3, 60, 0.1), 6u);
  EXPECT_EQ(cf::default_leftover_capacity(3, 10, 0.1), 3u);
  EXPECT_EQ(cf::PipelineConfig::desk(3, 60).leftover_capacity, std::optional<std::size_t>(6));
}

TEST(Pipeline, CompleteHostSucceeds) {
  const auto h = cf::complete_partite(3, 2, 12);
  auto cfg = cf::PipelineConfig::desk(3, 12);
  cfg.seed = 1;
  const auto r = cf::perfect_factor(h, cfg);
  ASSERT_TRUE(r.success) << (r.diagnostics.empty() ? "" : r.diagnostics.front());
  const auto rep = cf::verify_matching(h, r.matching);
  EXPECT_TRUE(rep.valid && rep.perfect);
  EXPECT_LE(r.leftover, 6u);
}

TEST(Pipeline, NeverSucceedsWithoutAFactor) {
  const auto h = cf::extremal_fractional(3, 2, 9);
  auto cfg = cf::PipelineConfig::desk(3, 9);
  cfg.max_outer_retries = 2;
  const auto r = cf::perfect_factor(h, cfg);
  EXPECT_FALSE(r.success);
  EXPECT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(cf::find_perfect_factor(h).status, cf::SearchStatus::None);
}

TEST(Pipeline, Deterministic) {
  const auto h = cf::random_with_min_codegree(3, 2, 30, 24, 2).graph;
  auto cfg = cf::PipelineConfig::desk(3, 30);
  cfg.seed = 9;
  const auto a = cf::perfect_factor(h, cfg);
  const auto b = cf::perfect_factor(h, cfg);
  EXPECT_EQ(a.success, b.success);
  EXPECT_EQ(a.matching.cliques, b.matching.cliques);
  EXPECT_EQ(a.diagnostics, b.diagnostics);
}

TEST(Scan, CsvShape) {
  cf::ScanConfig cfg;
  cfg.n_values = {3, 6};
  cfg.delta_fractions = {0.67};
  cfg.deltas = {3};
  cfg.samples = 2;
  const auto rows = cf::threshold_scan(cfg);
  ASSERT_EQ(rows.size(), 3u);  // n=3: delta 3; n=6: deltas 3 and 5
  EXPECT_EQ(rows[1].samples, 3u);  // n=6, delta 3 is the extremal codegree
  EXPECT_FALSE(rows[0].pipeline_success.has_value());
  EXPECT_TRUE(rows[1].pipeline_success.has_value());
  const auto csv = cf::scan_to_csv(rows, false);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,k,n,deltaTilde,samples,exactSuccess,pipelineSuccess,meanRuntimeMs");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv, cf::scan_to_csv(cf::threshold_scan(cfg), false));
  EXPECT_NE(csv.find("3,2,3,3,2,1,,\n"), std::string::npos);
}

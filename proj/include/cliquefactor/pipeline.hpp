#pragma once

// Perfect K_t^k-factors end to end: absorbing family U, near-perfect matching
// of H - U, absorption of the leftover. Plus an empirical threshold scan.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliquefactor/absorption.hpp"
#include "cliquefactor/approx.hpp"
#include "cliquefactor/hypergraph.hpp"

namespace cliquefactor {

struct PipelineConfig {
  double gamma = 0.1;
  AbsorptionConfig absorption;
  ApproxConfig approx;
  std::optional<std::size_t> leftover_capacity;  // default: default_leftover_capacity()
  std::size_t max_outer_retries = 10;
  /// Fill unset copy parameters from ApproxConfig::desk() at the class size
  /// left after removing U.
  bool desk_scale = false;
  Seed seed = 0;

  /// Desk-scale defaults for class size n.
  static PipelineConfig desk(std::uint32_t t, std::uint32_t n);
};

/// γ^{2t(t-1)} / (t^2 2^{2t+5}) as a fraction of tn, rounded down to a
/// multiple of t; t * ceil(0.02 n) when that is below one t-set.
std::size_t default_leftover_capacity(std::uint32_t t, std::uint32_t n, double gamma);

struct PipelineResult {
  bool success = false;
  Matching matching;
  std::size_t attempts = 0;
  std::size_t absorber_vertices = 0;  // |U| of the successful attempt
  std::size_t leftover = 0;           // |W| of the successful attempt
  std::vector<std::string> diagnostics;  // one line per failed stage
};

/// Soundness is unconditional: success implies a re-verified perfect factor.
PipelineResult perfect_factor(const PartiteHypergraph& h, const PipelineConfig& cfg);

struct ScanConfig {
  std::uint32_t t = 3;
  std::uint32_t k = 2;
  std::vector<std::uint32_t> n_values;
  std::vector<std::uint32_t> deltas;          // absolute codegree targets
  std::vector<double> delta_fractions;        // targets ceil(f n)
  std::size_t samples = 10;
  Seed seed = 0;
  std::uint32_t exact_max_vertices = 27;      // run the exact solver when tn <= this
  std::uint32_t pipeline_min_n = 6;           // run the pipeline when n >= this
  bool include_extremal = true;  // add the extremal instance to the cell at its codegree
  bool timing = false;
};

struct ScanRow {
  std::uint32_t t = 0, k = 0, n = 0, delta = 0;
  std::size_t samples = 0;
  std::optional<double> exact_success;
  std::optional<double> pipeline_success;
  double mean_runtime_ms = 0;
};

std::vector<ScanRow> threshold_scan(const ScanConfig& cfg);
/// Columns t,k,n,deltaTilde,samples,exactSuccess,pipelineSuccess,meanRuntimeMs.
std::string scan_to_csv(const std::vector<ScanRow>& rows, bool timing);

}  // namespace cliquefactor

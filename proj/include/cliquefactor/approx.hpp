#pragma once

// Near-perfect K_t^k-matchings by two rounds of randomization: sample many
// small balanced vertex subsets ("copies"), solve a perfect fractional
// matching on each, keep each copy clique with probability equal to its
// weight to form a sparse near-regular t-graph H*, then match H* with a
// nibble.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cliquefactor/fractional.hpp"
#include "cliquefactor/hypergraph.hpp"
#include "cliquefactor/random.hpp"

namespace cliquefactor {

struct ApproxConfig {
  double epsilon = 0.1;  // allowed uncovered fraction per class
  double gamma = 0.1;    // codegree slack used for the per-copy check
  std::optional<double> copy_prob;           // default n^-0.9
  std::optional<std::uint32_t> trimmed_size; // default n^0.1 - n^0.075, at least 1
  std::optional<std::size_t> copy_count;     // default round(n^1.1)
  double theta = 0.1;                        // nibble activation constant
  std::size_t improve_steps_per_vertex = 20; // swap phase budget; 0 disables it
  bool host_refinement = true;  // run the swap phase over all host cliques as well
  std::size_t max_retries = 20; // redraws per copy with an infeasible LP
  double max_flagged_fraction = 1.0;  // abort when more copies fail the codegree check
  std::size_t clique_cap = 2'000'000;
  Seed seed = 0;

  /// Desk-scale preset: m = min(n, 2t), N chosen so the expected H* degree
  /// is `target_degree`, p = min(1, 2m/n).
  static ApproxConfig desk(std::uint32_t t, std::uint32_t n, double target_degree = 20.0);
};

struct ApproxParams {
  double copy_prob = 1.0;
  std::uint32_t trimmed_size = 1;
  std::size_t copy_count = 1;
};

/// Fills the defaults of `cfg` for class size n.
ApproxParams resolve_params(const ApproxConfig& cfg, std::uint32_t n);

/// Fractional threshold ratio used for the per-copy check at class size m:
/// ceil((t-1)m/t)/m for k = 2, (ceil((1 - 1/C(t-1,k-1))m) + 1)/m for k >= 3.
double fractional_threshold_ratio(std::uint32_t t, std::uint32_t k, std::uint32_t m);

struct CopyFamilyStats {
  std::vector<std::size_t> membership;  // Y_v
  std::size_t pairs_in_three_or_more = 0;   // |{S in V^(2): Y_S >= 3}|
  std::size_t triples_in_two_or_more = 0;   // |{S in V^(3): Y_S >= 2}|
  std::vector<std::size_t> copy_min_codegree;
  std::vector<bool> flagged;   // copy below (φ* + γ/4) m
  std::size_t flagged_count = 0;
  std::size_t redraws = 0;     // binomial undershoots plus LP-infeasible redraws
};

struct CopySample {
  std::vector<std::vector<Vertex>> copies;  // sorted, trimmed_size vertices per class
  CopyFamilyStats stats;
};

/// Draws copy_count copies. Throws RetriesExhausted when more than
/// max_flagged_fraction of them fail the per-copy codegree check.
CopySample sample_copies(const PartiteHypergraph& h, const ApproxConfig& cfg);

/// Recomputes the statistics of a copy family from scratch.
CopyFamilyStats copy_family_stats(const PartiteHypergraph& h, const std::vector<std::vector<Vertex>>& copies,
                                  const ApproxConfig& cfg);

struct SparseGraph {
  TGraph graph;
  std::size_t multi_copy_cliques = 0;  // support cliques inside more than one copy
};

/// Keeps each support clique T of copy i_T (smallest containing copy) with
/// probability w^{i_T}(T). `solutions` are in host ids; each is re-verified
/// as a perfect fractional matching of its copy (std::invalid_argument).
SparseGraph build_sparse_tgraph(const PartiteHypergraph& h, const std::vector<std::vector<Vertex>>& copies,
                                const std::vector<FractionalAssignment>& solutions, Seed seed);

struct RegularityStats {
  double mean_degree = 0;   // D
  double tau = 0;           // max |deg(v) - D| / D
  bool tau_defined = false; // false when D = 0
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  std::size_t max_pair_degree = 0;  // Δ_2
};

RegularityStats regularity_stats(const TGraph& g);

struct NibbleOptions {
  double theta = 0.1;
  std::size_t improve_steps_per_vertex = 20;
};

struct NibbleResult {
  std::vector<std::size_t> edges;  // indices into the input graph
  std::size_t uncovered = 0;
  std::size_t rounds = 0;
  std::vector<std::size_t> uncovered_trace;  // after each round, the greedy tail and the swap phase
};

/// Semi-random rounds (activate each surviving edge w.p. θ/D, keep activated
/// edges without activated conflicts), greedy tail once fewer than 1/θ edges
/// survive, then a swap phase that never shrinks the matching.
NibbleResult nibble_matching(const TGraph& g, Seed seed, const NibbleOptions& options = {});

/// Random single-exchange improvement of a matching over `edges`: pick an
/// uncovered vertex, add a free edge through it or swap out the one member
/// blocking such an edge, then refill the freed vertices. Returns the number
/// of steps used. Never decreases the matching size.
std::size_t improve_matching(const std::vector<Clique>& edges, std::uint32_t vertex_count,
                             std::vector<std::size_t>& chosen, std::size_t steps, Rng& rng);

struct ApproxResult {
  Matching matching;
  std::size_t uncovered = 0;
  std::vector<std::size_t> uncovered_per_class;
  bool within_epsilon = false;
  ApproxParams params;
  CopyFamilyStats copy_stats;
  RegularityStats regularity;
  std::size_t sparse_edges = 0;
  std::size_t multi_copy_cliques = 0;
  std::size_t nibble_uncovered = 0;
  std::vector<std::string> violations;  // property checks that did not hold
};

/// Requires a balanced instance. Throws RetriesExhausted when some copy stays
/// LP-infeasible after max_retries redraws.
ApproxResult almost_perfect_factor(const PartiteHypergraph& h, const ApproxConfig& cfg);

}  // namespace cliquefactor

#pragma once

// Exact perfect-factor search on small instances (Algorithm X over dancing
// links, fail-first column choice) and a branch-and-bound maximum matching.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cliquefactor/hypergraph.hpp"

namespace cliquefactor {

struct ExactOptions {
  std::uint64_t node_budget = 10'000'000;
  std::size_t clique_cap = 5'000'000;
};

enum class SearchStatus { Found, None, Budget };

struct FactorSearch {
  SearchStatus status = SearchStatus::None;
  Matching matching;
  std::uint64_t nodes = 0;
};

/// Exact cover of `universe` (sorted) by members of `options` (each a sorted
/// subset of the universe).
FactorSearch find_exact_cover(std::span<const Vertex> universe, std::span<const Clique> options,
                              std::uint64_t node_budget);

FactorSearch find_perfect_factor(const PartiteHypergraph& h, const ExactOptions& options = {});

struct FactorCount {
  std::uint64_t count = 0;
  bool capped = false;            // stopped at `cap`; count is a lower bound
  bool budget_exhausted = false;  // stopped on nodes; count is a lower bound
  std::uint64_t nodes = 0;
};

/// Number of perfect factors (unordered families of cliques), up to `cap`.
FactorCount count_perfect_factors(const PartiteHypergraph& h, std::uint64_t cap,
                                  const ExactOptions& options = {});

struct AlmostFactor {
  Matching matching;
  std::size_t uncovered = 0;
  bool optimal = false;      // search completed, matching is maximum
  bool meets_target = false; // uncovered <= requested maximum
  std::uint64_t nodes = 0;
};

/// Maximum K_t^k-matching by branch and bound; best found when the budget
/// runs out (optimal = false).
AlmostFactor find_almost_factor(const PartiteHypergraph& h, std::size_t max_uncovered,
                                const ExactOptions& options = {});

}  // namespace cliquefactor

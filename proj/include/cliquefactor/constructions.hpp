#pragma once

// Instance generators: complete and extremal partite hypergraphs, seeded
// random instances (optionally repaired up to a codegree target), synthetic
// near-regular t-graphs and general k-graphs.

#include <cstddef>
#include <cstdint>

#include "cliquefactor/hypergraph.hpp"
#include "cliquefactor/partition.hpp"
#include "cliquefactor/random.hpp"

namespace cliquefactor {

struct GeneratorSpec {
  enum class Mode { Complete, Extremal, UniformRandom, MinCodegreeTarget };

  std::uint32_t t = 3;
  std::uint32_t k = 2;
  std::uint32_t n = 1;
  Mode mode = Mode::Complete;
  double edge_prob = 0.5;       // UniformRandom
  std::uint32_t target = 0;     // MinCodegreeTarget
  double margin = 0.05;         // MinCodegreeTarget calibration margin
  std::size_t max_sweeps = 10;  // MinCodegreeTarget repair sweeps
  Seed seed = 0;

  /// Throws std::invalid_argument when the invariants do not hold.
  void check() const;
};

/// Default cap on the number of legal k-sets a generator may materialize.
inline constexpr std::uint64_t kDefaultEdgeCap = 20'000'000;

PartiteHypergraph complete_partite(std::uint32_t t, std::uint32_t k, std::uint32_t n,
                                   std::uint64_t edge_cap = kDefaultEdgeCap);

/// |W_i| = ceil((t-k+1)n/t) - 1, the codegree of the extremal instance.
std::uint32_t extremal_codegree(std::uint32_t t, std::uint32_t k, std::uint32_t n);

/// Legal k-sets meeting W = union of the first extremal_codegree() vertices
/// of every class. Has no perfect fractional K_t^k-matching.
PartiteHypergraph extremal_fractional(std::uint32_t t, std::uint32_t k, std::uint32_t n);

/// Each legal k-set kept independently with probability p.
PartiteHypergraph random_partite(std::uint32_t t, std::uint32_t k, std::uint32_t n, double p, Seed seed);

struct RepairedInstance {
  PartiteHypergraph graph;
  std::size_t repairs = 0;  // edges added after sampling
  std::size_t sweeps = 0;
};

/// Uniform random instance at density target/n + margin, then repaired: every
/// deficient ((k-1)-set, class) pair receives its lexicographically smallest
/// missing completions until min codegree >= target. Throws RetriesExhausted
/// if that takes more than max_sweeps sweeps.
RepairedInstance random_with_min_codegree(std::uint32_t t, std::uint32_t k, std::uint32_t n, std::uint32_t target,
                                          Seed seed, double margin = 0.05, std::size_t max_sweeps = 10);

PartiteHypergraph generate(const GeneratorSpec& spec);

/// Union of `degree` random perfect matchings between the t classes (each of
/// size class_size), skipping any hyperedge that would repeat an edge or push
/// a pair degree above max_pair_degree.
TGraph near_regular_tgraph(std::uint32_t t, std::uint32_t class_size, std::uint32_t degree,
                           std::uint32_t max_pair_degree, Seed seed);

GeneralHypergraph complete_general(std::uint32_t n, std::uint32_t k);
GeneralHypergraph random_general(std::uint32_t n, std::uint32_t k, double p, Seed seed);
/// General analogue of random_with_min_codegree for δ_{k-1}.
GeneralHypergraph random_general_with_min_codegree(std::uint32_t n, std::uint32_t k, std::uint32_t target, Seed seed,
                                                   double margin = 0.05);

}  // namespace cliquefactor

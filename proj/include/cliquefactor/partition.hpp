#pragma once

// Random equipartition of a general k-graph into t classes that preserves
// codegrees, plus the link decomposition and badness test that drive it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cliquefactor/hypergraph.hpp"
#include "cliquefactor/random.hpp"

namespace cliquefactor {

struct ApproxConfig;
struct ApproxResult;

/// k-uniform hypergraph on vertices 0..n-1 without class structure.
class GeneralHypergraph {
 public:
  /// Throws std::invalid_argument on wrong-size, out-of-range, repeated-vertex
  /// or duplicate edges.
  GeneralHypergraph(std::uint32_t n, std::uint32_t k, std::vector<std::vector<Vertex>> edges);

  std::uint32_t n() const { return n_; }
  std::uint32_t k() const { return k_; }
  std::size_t edge_count() const { return edges_.size() / k_; }
  std::span<const Vertex> edge(std::size_t i) const { return {edges_.data() + i * k_, k_}; }
  std::span<const std::uint32_t> incident_edges(Vertex v) const {
    return {incidence_.data() + incidence_begin_[v], incidence_begin_[v + 1] - incidence_begin_[v]};
  }
  /// `vertices` sorted.
  bool has_edge(std::span<const Vertex> vertices) const;
  /// deg^H(T): edges containing the sorted set T.
  std::size_t degree(std::span<const Vertex> set) const;
  /// N^H(T) in lexicographic order.
  std::vector<std::vector<Vertex>> link(std::span<const Vertex> set) const;
  /// δ_l(H), minimum over all l-sets.
  std::size_t min_degree(std::uint32_t level) const;

 private:
  std::uint32_t n_;
  std::uint32_t k_;
  std::vector<Vertex> edges_;  // flat, sorted lexicographically
  std::vector<std::uint32_t> incidence_begin_;
  std::vector<std::uint32_t> incidence_;
};

/// Edge-disjoint matchings M_1..M_i0 covering the link of T, from a greedy
/// colouring of the link's intersection graph (edges in lexicographic order,
/// smallest free colour).
std::vector<std::vector<std::vector<Vertex>>> decompose_link(const GeneralHypergraph& h, std::span<const Vertex> set);

struct PartitionConfig {
  std::uint32_t t = 3;
  Seed seed = 0;
  std::size_t max_retries = 100;
  /// Audit every l-set when n is at most this, else `audit_samples` random ones.
  std::uint32_t exhaustive_audit_limit = 30;
  std::size_t audit_samples = 500;
};

/// Per audited l-set: the link matchings and the worst (i, J) cell of the
/// badness test (X_{i,J} against the threshold (1 - sqrt(2(2k-1) ln n / mu)) mu).
struct DecompositionStats {
  struct Entry {
    std::vector<Vertex> set;
    std::vector<std::size_t> matching_sizes;
    double worst_slack = 0;     // min over cells of X - threshold (+inf without cells)
    std::size_t worst_matching = 0;
    ClassSet worst_classes;     // J of the worst cell
    double worst_mu = 0;
    std::size_t worst_x = 0;
    bool bad = false;
  };
  std::vector<Entry> entries;
  std::size_t bad_sets = 0;
  bool exhaustive = true;
};

struct PreservationReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  bool exhaustive = true;
  double worst_margin = 0;  // min over checks of lhs - rhs
  std::vector<Vertex> worst_set;  // T (host ids)
  ClassSet worst_classes;         // J
  double worst_lhs = 0;
  double worst_rhs = 0;
  bool holds() const { return violations == 0; }
};

struct PartitionResult {
  std::uint32_t t = 0;
  std::vector<ClassIndex> assignment;         // class of each host vertex
  std::vector<std::vector<Vertex>> classes;   // sorted host ids, each of size n/t
  PartiteHypergraph partite;                  // H′; partite vertex (c, i) is classes[c][i]
  std::vector<Vertex> to_host;                // partite flat id -> host id
  std::vector<std::uint32_t> sampled_sizes;   // |U_j| before redistribution
  std::size_t moved = 0;                      // vertices redistributed
  std::size_t attempts = 0;
  DecompositionStats decomposition;
  PreservationReport preservation;
};

/// Throws std::invalid_argument unless t >= k and t | n; RetriesExhausted
/// when no sample passes the audit.
PartitionResult random_equipartition(const GeneralHypergraph& h, const PartitionConfig& cfg);

/// Checks (t^m/m!) deg^{H′}_J(T) >= deg^H(T) - 2 (t ln n)^{1/2} n^{m-1/2},
/// m = k - l, for every l in [k-1], legal T and admissible J; sampled when
/// the number of checks exceeds `exhaustive_limit`.
PreservationReport verify_degree_preservation(const GeneralHypergraph& h, const PartitionResult& result,
                                              std::size_t exhaustive_limit = 2'000'000, Seed seed = 0);

struct CoverResult {
  PartitionResult partition;
  Matching matching;  // host vertex ids, each member sorted
  std::size_t uncovered = 0;
  bool within_epsilon = false;
  std::vector<std::string> problems;  // re-verification failures against H
};

/// Equipartition then near-perfect K_t^k-matching on the partite part.
CoverResult cover_almost_all(const GeneralHypergraph& h, std::uint32_t t, const ApproxConfig& approx,
                             const PartitionConfig& partition);

/// Disjointness + every member spans K_t^k in h.
std::vector<std::string> verify_general_matching(const GeneralHypergraph& h, std::uint32_t t, const Matching& m);

}  // namespace cliquefactor

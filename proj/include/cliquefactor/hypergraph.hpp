#pragma once

// Balanced t-partite k-uniform hypergraphs, legal sets, codegrees and
// K_t^k enumeration.
//
// Vertices are flat indices: class c occupies the contiguous range
// [class_begin(c), class_begin(c) + class_size(c)), so ordering flat indices
// is the same as ordering (class, within-class index) pairs. Every edge and
// every clique is stored sorted, which makes all enumerations deterministic.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cliquefactor/bitset.hpp"

namespace cliquefactor {

using Vertex = std::uint32_t;
using ClassIndex = std::uint32_t;
/// Sorted class indices.
using ClassSet = std::vector<ClassIndex>;
/// A [t]-legal t-set, sorted (one vertex per class, in class order).
using Clique = std::vector<Vertex>;

struct VertexId {
  ClassIndex cls = 0;
  std::uint32_t idx = 0;
  auto operator<=>(const VertexId&) const = default;
};

/// Unchecked instance data as read from a file; see validate().
struct RawInstance {
  std::uint32_t t = 0;
  std::uint32_t k = 0;
  std::vector<std::uint32_t> class_sizes;
  std::vector<std::vector<VertexId>> edges;
};

struct Violation {
  enum class Kind { BadParameters, BadClassIndex, BadVertexIndex, WrongEdgeSize, IllegalEdge, DuplicateEdge };
  Kind kind;
  std::size_t edge = 0;  // offending edge position (unused for BadParameters)
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every invariant violation of a raw instance.
ValidationReport validate(const RawInstance& raw);

/// A vertex set together with the classes it touches.
struct LegalSet {
  std::vector<Vertex> vertices;  // sorted
  ClassSet classes;              // classes[i] is the class of vertices[i]
};

class PartiteHypergraph {
 public:
  /// Edges may be given in any vertex order. Throws std::invalid_argument on
  /// an illegal, duplicate or out-of-range edge.
  PartiteHypergraph(std::uint32_t t, std::uint32_t k, std::vector<std::uint32_t> class_sizes,
                    std::vector<std::vector<Vertex>> edges);

  /// Throws std::invalid_argument carrying the first violation.
  static PartiteHypergraph from_raw(const RawInstance& raw);
  RawInstance to_raw() const;

  std::uint32_t t() const { return t_; }
  std::uint32_t k() const { return k_; }
  const std::vector<std::uint32_t>& class_sizes() const { return class_sizes_; }
  std::uint32_t class_size(ClassIndex c) const { return class_sizes_[c]; }
  bool balanced() const { return balanced_; }
  /// Common class size; throws std::logic_error if unbalanced.
  std::uint32_t n() const;

  std::uint32_t vertex_count() const { return vertex_count_; }
  Vertex class_begin(ClassIndex c) const { return class_begin_[c]; }
  ClassIndex class_of(Vertex v) const { return class_of_[v]; }
  std::uint32_t index_in_class(Vertex v) const { return v - class_begin_[class_of_[v]]; }
  Vertex vertex(ClassIndex c, std::uint32_t idx) const { return class_begin_[c] + idx; }
  VertexId id(Vertex v) const { return {class_of(v), index_in_class(v)}; }

  std::size_t edge_count() const { return edges_.size() / k_; }
  std::span<const Vertex> edge(std::size_t i) const { return {edges_.data() + i * k_, k_}; }
  /// Edge indices containing v, increasing.
  std::span<const std::uint32_t> incident_edges(Vertex v) const {
    return {incidence_.data() + incidence_begin_[v], incidence_begin_[v + 1] - incidence_begin_[v]};
  }

  /// `vertices` must be a sorted legal set of size k.
  bool has_edge(std::span<const Vertex> vertices) const;

  /// Completions of a sorted legal (k-1)-set inside class `cls` (not touched
  /// by the set), as a bitset over the class's within-class indices.
  const Bitset& link(std::span<const Vertex> set, ClassIndex cls) const;

  /// Induced subhypergraph on `keep` (sorted). Class sizes shrink to the
  /// kept counts; to_host maps new vertex ids back to this graph's ids.
  struct Induced;
  Induced induced(std::span<const Vertex> keep) const;

  /// True iff the sorted vertex set meets every class at most once.
  bool is_legal(std::span<const Vertex> vertices) const;
  /// Builds a LegalSet; throws std::invalid_argument when not legal.
  LegalSet legal_set(std::vector<Vertex> vertices) const;

 private:
  std::size_t link_slot(std::span<const Vertex> set, ClassIndex cls) const;

  std::uint32_t t_;
  std::uint32_t k_;
  std::vector<std::uint32_t> class_sizes_;
  bool balanced_ = true;
  std::uint32_t vertex_count_ = 0;
  std::vector<Vertex> class_begin_;
  std::vector<ClassIndex> class_of_;
  std::vector<Vertex> edges_;  // flat, k per edge, edges sorted lexicographically
  std::vector<std::uint32_t> incidence_begin_;
  std::vector<std::uint32_t> incidence_;

  // (k-1)-level codegree index: for each class set I of size k-1 (by bitmask)
  // a base slot, then mixed-radix over the within-class indices, then one
  // bitset per class outside I in increasing order.
  std::vector<std::uint32_t> combo_base_;  // indexed by class bitmask
  std::vector<Bitset> links_;
};

struct PartiteHypergraph::Induced {
  PartiteHypergraph graph;
  std::vector<Vertex> to_host;
};

/// |N_J(T)|: number of J-legal S with S ∪ T an edge. Throws
/// std::invalid_argument unless J is disjoint from T's classes and
/// |T| + |J| = k.
std::size_t codegree(const PartiteHypergraph& h, const LegalSet& set, const ClassSet& J);

struct CodegreeReport {
  std::uint32_t level = 0;
  struct PerClassSet {
    ClassSet classes;  // I
    std::size_t minimum = 0;
  };
  std::vector<PerClassSet> per_class_set;
  std::size_t overall = 0;
  LegalSet witness_set;  // T attaining `overall` (first in lexicographic order)
  ClassSet witness_classes;  // J
};

/// Exact δ̃_l(H) with witnesses; 1 <= level <= k-1.
CodegreeReport min_codegree(const PartiteHypergraph& h, std::uint32_t level);

struct CliqueList {
  std::vector<Clique> cliques;
  bool truncated = false;  // cap hit; `cliques` holds the first `cap` results
};

/// All K_t^k copies in lexicographic order. With `within`, only vertices set
/// in the mask (over flat vertex ids) are used.
CliqueList enumerate_cliques(const PartiteHypergraph& h, std::optional<std::size_t> cap = std::nullopt,
                             const Bitset* within = nullptr);

/// True iff the sorted [t]-legal t-set spans a K_t^k.
bool is_clique(const PartiteHypergraph& h, std::span<const Vertex> vertices);

/// A t-graph on a partitioned vertex set (used for H′ and the sparse H*).
struct TGraph {
  std::uint32_t t = 0;
  std::vector<std::uint32_t> class_sizes;
  std::vector<Clique> edges;  // each sorted, [t]-legal

  std::uint32_t vertex_count() const;
};

/// H′: hyperedges are exactly the K_t^k copies of h.
TGraph auxiliary_clique_graph(const PartiteHypergraph& h);

/// Vertex-disjoint family of K_t^k copies.
struct Matching {
  std::vector<Clique> cliques;

  std::size_t covered() const;
};

struct MatchingReport {
  bool valid = true;  // disjoint, legal, every member a clique of the host
  bool perfect = false;
  std::size_t covered = 0;
  std::size_t uncovered = 0;
  std::vector<std::string> problems;
};

/// Re-verifies m against h from scratch.
MatchingReport verify_matching(const PartiteHypergraph& h, const Matching& m);

/// Binomial coefficient (exact in 64 bits for the sizes used here).
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

/// All r-subsets of [0, n) in lexicographic order.
std::vector<std::vector<std::uint32_t>> combinations(std::uint32_t n, std::uint32_t r);

}  // namespace cliquefactor

#pragma once

// Absorbing m-sets (m = t(t-1)) and the absorbing family.
//
// A balanced m-set A absorbs a balanced t-set T when A and T are disjoint and
// both A and A ∪ T are perfectly matchable in the clique t-graph H′.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cliquefactor/hypergraph.hpp"
#include "cliquefactor/random.hpp"

namespace cliquefactor {

struct AbsorptionConfig {
  double gamma = 0.1;
  std::optional<double> selection_prob;  // default: absorbing_selection_probability()
  std::optional<std::size_t> family_size_budget;  // cap on |U| in vertices
  std::size_t leftover_capacity = 0;  // largest |W| the family must absorb
  std::size_t max_retries = 20;
  std::size_t audit_size = 20;  // balanced t-sets sampled for the coverage audit
  Seed seed = 0;
};

/// p = γ^m n / (t^3 2^{t+3} C(n,t-1)^t).
double absorbing_selection_probability(std::uint32_t t, std::uint32_t n, double gamma);
/// γ^m C(n,t-1)^t / 2^t, the guaranteed number of absorbing m-sets per T.
double absorbing_count_lower_bound(std::uint32_t t, std::uint32_t n, double gamma);

/// Perfect matching of H′[A ∪ T] (T may be empty), if any. Throws
/// std::invalid_argument on size/balance violations.
std::optional<Matching> absorbing_matching(const PartiteHypergraph& h, std::span<const Vertex> absorber,
                                           std::span<const Vertex> target);

/// False when A ∩ T ≠ ∅. Throws std::invalid_argument when |A| != t(t-1),
/// |T| != t or either is unbalanced.
bool is_absorbing(const PartiteHypergraph& h, std::span<const Vertex> absorber, std::span<const Vertex> target);

struct AbsorbingSetSearch {
  std::vector<std::vector<Vertex>> sets;  // distinct, sorted, each absorbing T
  std::size_t attempts = 0;
  bool budget_exhausted = false;
};

/// Builds absorbing sets for T edge by edge: an H′-edge v_1 u_2..u_t avoiding
/// T, then for each j >= 2 a (t-1)-set U_j avoiding everything chosen so far
/// with U_j + u_j and U_j + v_j both in H′. Random mode draws `budget` such
/// constructions; exhaustive mode walks every construction (budget counts
/// search nodes).
AbsorbingSetSearch find_absorbing_sets(const PartiteHypergraph& h, std::span<const Vertex> target,
                                       std::size_t budget, Seed seed, bool exhaustive = false);

struct AbsorbingFamily {
  std::uint32_t t = 0;
  std::vector<std::vector<Vertex>> members;  // F′, pairwise disjoint balanced m-sets
  std::vector<Matching> member_matchings;    // (t-1)-matching of each member
  std::vector<Vertex> vertices;              // U, sorted
  struct AuditEntry {
    std::vector<Vertex> target;
    std::size_t absorbers = 0;  // |L(T) ∩ F′|
  };
  std::vector<AuditEntry> audit;
  std::size_t target_members = 0;
  std::size_t sampled = 0;
  std::size_t discarded_intersecting = 0;
  std::size_t discarded_non_absorbing = 0;
  std::size_t attempts = 0;
  std::size_t leftover_capacity = 0;
};

/// Members are uniform balanced m-sets drawn one at a time and kept when
/// disjoint from earlier members and matchable in H′. Throws
/// std::invalid_argument when family_size_budget cannot hold
/// leftover_capacity / t members, RetriesExhausted if no attempt yields a
/// family that passes the audit.
AbsorbingFamily build_absorbing_family(const PartiteHypergraph& h, const AbsorptionConfig& cfg);

/// Perfect matching of H[U ∪ W]. W must be balanced, disjoint from U and no
/// larger than the family's leftover capacity (std::invalid_argument).
/// Throws AbsorptionFailure when some t-set of W finds no unused member.
Matching absorb_leftover(const PartiteHypergraph& h, const AbsorbingFamily& family, std::span<const Vertex> leftover);

}  // namespace cliquefactor

#pragma once

// Perfect fractional K_t^k-matchings and Farkas certificates.
//
// The LP has one variable per clique and one equality row per vertex
// (sum of weights of cliques through v equals 1). solve_fractional runs an
// exact-rational phase-1 revised simplex with Bland's rule; when the phase-1
// optimum is positive the negated terminal duals form a vertex weighting w
// with sum_{v in T} w(v) >= 0 for every clique T and sum_v w(v) < 0.

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cliquefactor/hypergraph.hpp"

namespace cliquefactor {

using Rational = mpq_class;

/// "p/q" with q >= 1 (always written with a denominator).
std::string to_string(const Rational& r);
/// Accepts "p/q" or an integer.
Rational parse_rational(const std::string& text);

struct FractionalAssignment {
  std::vector<Clique> cliques;     // support
  std::vector<Rational> weights;   // weights[i] belongs to cliques[i]

  Rational size() const;
};

struct FarkasCertificate {
  enum class Form { Raw, Normalized };
  Form form = Form::Raw;
  std::vector<Rational> weights;  // one per vertex
};

struct LpOptions {
  std::size_t clique_cap = 200'000;
  /// Row order as a permutation of the vertices (empty: identity). Only the
  /// pivoting path changes; the verdict must not.
  std::vector<Vertex> row_order;
};

struct LpResult {
  enum class Status { Feasible, Infeasible };
  Status status = Status::Infeasible;
  FractionalAssignment assignment;  // Feasible
  FarkasCertificate certificate;    // Infeasible (raw form)
  std::size_t clique_count = 0;
  std::size_t pivots = 0;

  bool feasible() const { return status == Status::Feasible; }
};

/// Requires a balanced instance. Throws CapExceeded past options.clique_cap.
LpResult solve_fractional(const PartiteHypergraph& h, const LpOptions& options = {});

struct AssignmentReport {
  bool valid = true;
  Rational size;
  std::vector<std::string> problems;
};

/// 0 <= w <= 1, every support member a clique, vertex loads <= 1; with
/// `perfect`, loads == 1 and size == n.
AssignmentReport verify_assignment(const PartiteHypergraph& h, const FractionalAssignment& a, bool perfect);

struct CertificateReport {
  bool valid = true;
  Rational total;            // sum over all vertices
  Rational min_clique_sum;   // over all cliques (0 when there are none)
  std::size_t cliques_checked = 0;
  std::vector<std::string> problems;
};

/// Raw: every clique sum >= 0 and total < 0. Normalized: weights in [0,1],
/// every clique sum >= 1 and total < n.
CertificateReport verify_certificate(const PartiteHypergraph& h, const FarkasCertificate& c);

/// Raw -> normalized: shift classes so their minima agree, scale the common
/// minimum to -1, clamp at t-1, then map w -> (w+1)/t. Throws
/// std::invalid_argument if c is not a valid raw certificate.
FarkasCertificate normalize_certificate(const PartiteHypergraph& h, const FarkasCertificate& c);

/// w = (k-1)/(t-k+1) on W, -1 elsewhere, for extremal_fractional(t, k, n).
FarkasCertificate extremal_certificate(std::uint32_t t, std::uint32_t k, std::uint32_t n);

}  // namespace cliquefactor

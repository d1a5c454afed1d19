#include "cliquefactor/fractional.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cliquefactor/constructions.hpp"
#include "cliquefactor/errors.hpp"

namespace cliquefactor {

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

Rational FractionalAssignment::size() const {
  Rational total = 0;
  for (const auto& w : weights) total += w;
  return total;
}

namespace {

// Phase-1 revised simplex over the clique columns with an explicit basis
// inverse. Artificial columns (one per row) start basic and are dropped for
// good once they leave.
class PhaseOneSimplex {
 public:
  PhaseOneSimplex(const std::vector<Clique>& cliques, const std::vector<std::size_t>& row_of)
      : cliques_(cliques), row_of_(row_of), rows_(row_of.size()), cols_(cliques.size()) {
    binv_.assign(rows_, std::vector<Rational>(rows_));
    for (std::size_t r = 0; r < rows_; ++r) binv_[r][r] = 1;
    basis_.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) basis_[r] = cols_ + r;
    xb_.assign(rows_, Rational(1));
    y_.assign(rows_, Rational(0));
    d_.assign(rows_, Rational(0));
  }

  /// True when the phase-1 optimum is zero.
  bool run() {
    std::vector<bool> basic(cols_, false);
    while (true) {
      if (objective() == 0) return true;
      compute_duals();
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (basic[j]) continue;
        Rational load = 0;
        for (Vertex v : cliques_[j]) load += y_[row_of_[v]];
        if (sgn(load) > 0) {  // reduced cost -load < 0
          entering = j;
          break;
        }
      }
      if (entering == cols_) return false;

      for (std::size_t r = 0; r < rows_; ++r) {
        d_[r] = 0;
        for (Vertex v : cliques_[entering]) d_[r] += binv_[r][row_of_[v]];
      }
      std::size_t leave = rows_;
      Rational best;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (sgn(d_[r]) <= 0) continue;
        Rational ratio = xb_[r] / d_[r];
        if (leave == rows_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) throw std::logic_error("phase-1 simplex: unbounded direction");

      pivot(leave, best);
      if (basis_[leave] < cols_) basic[basis_[leave]] = false;
      basis_[leave] = entering;
      basic[entering] = true;
      ++pivots_;
    }
  }

  std::size_t pivots() const { return pivots_; }
  const std::vector<Rational>& duals() const { return y_; }

  /// Structural basic values (index, value) with value != 0.
  std::vector<std::pair<std::size_t, Rational>> solution() const {
    std::vector<std::pair<std::size_t, Rational>> out;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_ && sgn(xb_[r]) != 0) out.emplace_back(basis_[r], xb_[r]);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

 private:
  Rational objective() const {
    Rational total = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] >= cols_) total += xb_[r];
    }
    return total;
  }

  // y = c_B^T B^{-1}; only artificial basics carry cost 1.
  void compute_duals() {
    for (auto& v : y_) v = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) continue;
      const auto& row = binv_[r];
      for (std::size_t c = 0; c < rows_; ++c) {
        if (sgn(row[c]) != 0) y_[c] += row[c];
      }
    }
  }

  void pivot(std::size_t p, const Rational& theta) {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != p && sgn(d_[r]) != 0) xb_[r] -= theta * d_[r];
    }
    xb_[p] = theta;
    const Rational inv = 1 / d_[p];
    auto& prow = binv_[p];
    for (auto& v : prow) {
      if (sgn(v) != 0) v *= inv;
    }
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < rows_; ++c) {
      if (sgn(prow[c]) != 0) nz.push_back(c);
    }
    Rational tmp;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == p || sgn(d_[r]) == 0) continue;
      auto& row = binv_[r];
      for (std::size_t c : nz) {
        tmp = d_[r] * prow[c];
        row[c] -= tmp;
      }
    }
  }

  const std::vector<Clique>& cliques_;
  const std::vector<std::size_t>& row_of_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> xb_;
  std::vector<Rational> y_;
  std::vector<Rational> d_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpResult solve_fractional(const PartiteHypergraph& h, const LpOptions& options) {
  if (!h.balanced()) throw std::invalid_argument("solve_fractional: instance is not balanced");
  auto list = enumerate_cliques(h, options.clique_cap);
  if (list.truncated) {
    throw CapExceeded("solve_fractional: more than " + std::to_string(options.clique_cap) + " cliques");
  }
  LpResult result;
  result.clique_count = list.cliques.size();
  const std::uint32_t vertex_count = h.vertex_count();

  // Vertices in no clique make the system trivially infeasible: -1 on each of
  // them, 0 elsewhere, is a certificate.
  std::vector<bool> covered(vertex_count, false);
  for (const auto& c : list.cliques) {
    for (Vertex v : c) covered[v] = true;
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    result.status = LpResult::Status::Infeasible;
    result.certificate.form = FarkasCertificate::Form::Raw;
    result.certificate.weights.assign(vertex_count, Rational(0));
    for (Vertex v = 0; v < vertex_count; ++v) {
      if (!covered[v]) result.certificate.weights[v] = -1;
    }
    return result;
  }

  std::vector<std::size_t> row_of(vertex_count);
  if (options.row_order.empty()) {
    std::iota(row_of.begin(), row_of.end(), std::size_t{0});
  } else {
    if (options.row_order.size() != vertex_count) throw std::invalid_argument("row_order is not a permutation");
    std::vector<bool> seen(vertex_count, false);
    for (std::size_t r = 0; r < vertex_count; ++r) {
      const Vertex v = options.row_order[r];
      if (v >= vertex_count || seen[v]) throw std::invalid_argument("row_order is not a permutation");
      seen[v] = true;
      row_of[v] = r;
    }
  }

  PhaseOneSimplex lp(list.cliques, row_of);
  const bool feasible = lp.run();
  result.pivots = lp.pivots();
  if (feasible) {
    result.status = LpResult::Status::Feasible;
    for (auto& [j, value] : lp.solution()) {
      result.assignment.cliques.push_back(list.cliques[j]);
      result.assignment.weights.push_back(value);
    }
  } else {
    result.status = LpResult::Status::Infeasible;
    result.certificate.form = FarkasCertificate::Form::Raw;
    result.certificate.weights.resize(vertex_count);
    for (Vertex v = 0; v < vertex_count; ++v) result.certificate.weights[v] = -lp.duals()[row_of[v]];
  }
  return result;
}

AssignmentReport verify_assignment(const PartiteHypergraph& h, const FractionalAssignment& a, bool perfect) {
  AssignmentReport report;
  report.size = 0;
  if (a.cliques.size() != a.weights.size()) {
    report.valid = false;
    report.problems.push_back("clique and weight counts differ");
    return report;
  }
  std::vector<Rational> load(h.vertex_count(), Rational(0));
  for (std::size_t i = 0; i < a.cliques.size(); ++i) {
    const auto& c = a.cliques[i];
    const auto& w = a.weights[i];
    const bool in_range = std::all_of(c.begin(), c.end(), [&](Vertex v) { return v < h.vertex_count(); });
    if (!in_range || !is_clique(h, c)) {
      report.valid = false;
      report.problems.push_back("support member " + std::to_string(i) + " is not a clique");
      continue;
    }
    if (sgn(w) < 0 || w > 1) {
      report.valid = false;
      report.problems.push_back("weight " + to_string(w) + " of member " + std::to_string(i) + " outside [0,1]");
    }
    for (Vertex v : c) load[v] += w;
    report.size += w;
  }
  for (Vertex v = 0; v < h.vertex_count(); ++v) {
    if (load[v] > 1) {
      report.valid = false;
      report.problems.push_back("vertex " + std::to_string(v) + " has load " + to_string(load[v]));
    } else if (perfect && load[v] != 1) {
      report.valid = false;
      report.problems.push_back("vertex " + std::to_string(v) + " has load " + to_string(load[v]) + " != 1");
    }
  }
  if (perfect) {
    if (!h.balanced() || report.size != Rational(h.n())) {
      report.valid = false;
      report.problems.push_back("size " + to_string(report.size) + " is not n");
    }
  }
  return report;
}

CertificateReport verify_certificate(const PartiteHypergraph& h, const FarkasCertificate& c) {
  CertificateReport report;
  report.total = 0;
  report.min_clique_sum = 0;
  if (c.weights.size() != h.vertex_count()) {
    report.valid = false;
    report.problems.push_back("certificate does not weight every vertex");
    return report;
  }
  const bool normalized = c.form == FarkasCertificate::Form::Normalized;
  for (const auto& w : c.weights) report.total += w;
  if (normalized) {
    for (Vertex v = 0; v < h.vertex_count(); ++v) {
      if (sgn(c.weights[v]) < 0 || c.weights[v] > 1) {
        report.valid = false;
        report.problems.push_back("weight of vertex " + std::to_string(v) + " outside [0,1]");
      }
    }
  }
  const Rational clique_floor = normalized ? 1 : 0;
  bool first = true;
  for (const auto& clique : enumerate_cliques(h).cliques) {
    Rational sum = 0;
    for (Vertex v : clique) sum += c.weights[v];
    if (first || sum < report.min_clique_sum) report.min_clique_sum = sum;
    first = false;
    ++report.cliques_checked;
    if (sum < clique_floor) {
      report.valid = false;
      if (report.problems.size() < 16) {
        std::string members;
        for (Vertex v : clique) members += (members.empty() ? "" : ",") + std::to_string(v);
        report.problems.push_back("clique {" + members + "} has sum " + to_string(sum));
      }
    }
  }
  if (normalized) {
    if (!h.balanced() || !(report.total < Rational(h.n()))) {
      report.valid = false;
      report.problems.push_back("total " + to_string(report.total) + " is not below n");
    }
  } else if (!(sgn(report.total) < 0)) {
    report.valid = false;
    report.problems.push_back("total " + to_string(report.total) + " is not negative");
  }
  return report;
}

FarkasCertificate normalize_certificate(const PartiteHypergraph& h, const FarkasCertificate& c) {
  if (c.form != FarkasCertificate::Form::Raw) throw std::invalid_argument("normalize_certificate: expects raw form");
  if (!h.balanced()) throw std::invalid_argument("normalize_certificate: instance is not balanced");
  const auto check = verify_certificate(h, c);
  if (!check.valid) {
    throw std::invalid_argument("normalize_certificate: not a valid raw certificate (" + check.problems.front() + ")");
  }
  const std::uint32_t t = h.t();
  std::vector<Rational> w = c.weights;

  // Moving weight between classes keeps every clique sum (one vertex per class)
  // and, on a balanced instance, the total; use it to equalize class minima.
  std::vector<Rational> class_min(t);
  for (ClassIndex cls = 0; cls < t; ++cls) {
    class_min[cls] = w[h.class_begin(cls)];
    for (std::uint32_t i = 1; i < h.class_size(cls); ++i) {
      class_min[cls] = std::min(class_min[cls], w[h.vertex(cls, i)]);
    }
  }
  Rational common = 0;
  for (const auto& m : class_min) common += m;
  common /= t;
  for (Vertex v = 0; v < h.vertex_count(); ++v) w[v] += common - class_min[h.class_of(v)];
  if (sgn(common) >= 0) throw std::logic_error("normalize_certificate: class minima are not negative");

  const Rational scale = -1 / common;
  const Rational cap = t - 1;
  for (auto& x : w) {
    x *= scale;
    if (x > cap) x = cap;
    x = (x + 1) / t;
  }
  return {FarkasCertificate::Form::Normalized, std::move(w)};
}

FarkasCertificate extremal_certificate(std::uint32_t t, std::uint32_t k, std::uint32_t n) {
  if (k < 2 || k > t || n < 1) throw std::invalid_argument("extremal_certificate: need 2 <= k <= t and n >= 1");
  const std::uint32_t w_size = extremal_codegree(t, k, n);
  const Rational heavy(static_cast<long>(k - 1), static_cast<unsigned long>(t - k + 1));
  FarkasCertificate cert;
  cert.form = FarkasCertificate::Form::Raw;
  cert.weights.resize(std::size_t{t} * n);
  for (std::uint32_t c = 0; c < t; ++c) {
    for (std::uint32_t i = 0; i < n; ++i) cert.weights[std::size_t{c} * n + i] = i < w_size ? heavy : Rational(-1);
  }
  for (auto& x : cert.weights) x.canonicalize();
  return cert;
}

}  // namespace cliquefactor

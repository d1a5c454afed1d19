#include "cliquefactor/hypergraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace cliquefactor {

namespace {

constexpr std::uint32_t kMaxClasses = 16;

std::string describe(const std::vector<VertexId>& edge) {
  std::string out = "{";
  for (std::size_t i = 0; i < edge.size(); ++i) {
    if (i) out += ",";
    out += "c" + std::to_string(edge[i].cls) + ".v" + std::to_string(edge[i].idx);
  }
  return out + "}";
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= r; ++i) result = result * (n - r + i) / i;
  return result;
}

std::vector<std::vector<std::uint32_t>> combinations(std::uint32_t n, std::uint32_t r) {
  std::vector<std::vector<std::uint32_t>> out;
  if (r > n) return out;
  std::vector<std::uint32_t> cur(r);
  std::iota(cur.begin(), cur.end(), 0U);
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(r) - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - r + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (auto j = static_cast<std::size_t>(i) + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

ValidationReport validate(const RawInstance& raw) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::size_t edge, std::string msg) {
    report.violations.push_back({kind, edge, std::move(msg)});
  };
  if (raw.t < 2 || raw.t > kMaxClasses || raw.k < 2 || raw.k > raw.t) {
    add(Violation::Kind::BadParameters, 0,
        "parameters must satisfy 2 <= k <= t <= " + std::to_string(kMaxClasses) +
            " (got t=" + std::to_string(raw.t) + ", k=" + std::to_string(raw.k) + ")");
    return report;
  }
  if (raw.class_sizes.size() != raw.t) {
    add(Violation::Kind::BadParameters, 0,
        "expected " + std::to_string(raw.t) + " class sizes, got " + std::to_string(raw.class_sizes.size()));
    return report;
  }
  std::set<std::vector<VertexId>> seen;
  for (std::size_t e = 0; e < raw.edges.size(); ++e) {
    const auto& edge = raw.edges[e];
    bool ok = true;
    if (edge.size() != raw.k) {
      add(Violation::Kind::WrongEdgeSize, e,
          "edge " + describe(edge) + " has " + std::to_string(edge.size()) + " vertices, expected " +
              std::to_string(raw.k));
      ok = false;
    }
    for (const auto& v : edge) {
      if (v.cls >= raw.t) {
        add(Violation::Kind::BadClassIndex, e, "edge " + describe(edge) + " uses class index out of range");
        ok = false;
      } else if (v.idx >= raw.class_sizes[v.cls]) {
        add(Violation::Kind::BadVertexIndex, e, "edge " + describe(edge) + " uses vertex index out of range");
        ok = false;
      }
    }
    auto sorted = edge;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].cls == sorted[i - 1].cls) {
        add(Violation::Kind::IllegalEdge, e, "edge not legal: " + describe(edge) + " meets a class twice");
        ok = false;
        break;
      }
    }
    if (ok && !seen.insert(sorted).second) {
      add(Violation::Kind::DuplicateEdge, e, "duplicate edge " + describe(edge));
    }
  }
  return report;
}

PartiteHypergraph::PartiteHypergraph(std::uint32_t t, std::uint32_t k, std::vector<std::uint32_t> class_sizes,
                                     std::vector<std::vector<Vertex>> edges)
    : t_(t), k_(k), class_sizes_(std::move(class_sizes)) {
  if (t_ < 2 || t_ > kMaxClasses || k_ < 2 || k_ > t_) {
    throw std::invalid_argument("PartiteHypergraph: need 2 <= k <= t <= 16");
  }
  if (class_sizes_.size() != t_) throw std::invalid_argument("PartiteHypergraph: class size count != t");
  balanced_ = std::all_of(class_sizes_.begin(), class_sizes_.end(),
                          [&](std::uint32_t s) { return s == class_sizes_.front(); });
  class_begin_.resize(t_ + 1);
  for (ClassIndex c = 0; c < t_; ++c) class_begin_[c + 1] = class_begin_[c] + class_sizes_[c];
  vertex_count_ = class_begin_[t_];
  class_of_.resize(vertex_count_);
  for (ClassIndex c = 0; c < t_; ++c) {
    std::fill(class_of_.begin() + class_begin_[c], class_of_.begin() + class_begin_[c + 1], c);
  }

  for (auto& e : edges) {
    if (e.size() != k_) throw std::invalid_argument("PartiteHypergraph: edge of wrong size");
    std::sort(e.begin(), e.end());
    for (Vertex v : e) {
      if (v >= vertex_count_) throw std::invalid_argument("PartiteHypergraph: vertex out of range");
    }
    if (!is_legal(e)) throw std::invalid_argument("PartiteHypergraph: edge not legal");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("PartiteHypergraph: duplicate edge");
  }
  edges_.reserve(edges.size() * k_);
  for (const auto& e : edges) edges_.insert(edges_.end(), e.begin(), e.end());

  incidence_begin_.assign(vertex_count_ + 1, 0);
  for (Vertex v : edges_) ++incidence_begin_[v + 1];
  std::partial_sum(incidence_begin_.begin(), incidence_begin_.end(), incidence_begin_.begin());
  incidence_.resize(edges_.size());
  {
    auto fill = incidence_begin_;
    for (std::size_t e = 0; e < edge_count(); ++e) {
      for (Vertex v : edge(e)) incidence_[fill[v]++] = static_cast<std::uint32_t>(e);
    }
  }

  // Codegree index at level k-1.
  combo_base_.assign(std::size_t{1} << t_, 0);
  std::uint32_t slots = 0;
  const std::uint32_t outside = t_ - (k_ - 1);
  std::vector<Bitset> links;
  for (const auto& combo : combinations(t_, k_ - 1)) {
    std::uint32_t mask = 0;
    std::uint64_t count = 1;
    for (auto c : combo) {
      mask |= 1U << c;
      count *= class_sizes_[c];
    }
    combo_base_[mask] = slots;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (ClassIndex j = 0; j < t_; ++j) {
        if (!(mask >> j & 1U)) links.emplace_back(class_sizes_[j]);
      }
    }
    slots += static_cast<std::uint32_t>(count * outside);
  }
  links_ = std::move(links);
  std::vector<Vertex> rest(k_ - 1);
  for (std::size_t e = 0; e < edge_count(); ++e) {
    auto ev = edge(e);
    for (std::uint32_t drop = 0; drop < k_; ++drop) {
      std::size_t r = 0;
      for (std::uint32_t i = 0; i < k_; ++i) {
        if (i != drop) rest[r++] = ev[i];
      }
      links_[link_slot(rest, class_of(ev[drop]))].set(index_in_class(ev[drop]));
    }
  }
}

PartiteHypergraph PartiteHypergraph::from_raw(const RawInstance& raw) {
  const auto report = validate(raw);
  if (!report.ok()) throw std::invalid_argument(report.violations.front().message);
  std::vector<Vertex> begin(raw.t + 1, 0);
  for (ClassIndex c = 0; c < raw.t; ++c) begin[c + 1] = begin[c] + raw.class_sizes[c];
  std::vector<std::vector<Vertex>> edges;
  edges.reserve(raw.edges.size());
  for (const auto& e : raw.edges) {
    std::vector<Vertex> flat;
    flat.reserve(e.size());
    for (const auto& v : e) flat.push_back(begin[v.cls] + v.idx);
    edges.push_back(std::move(flat));
  }
  return PartiteHypergraph(raw.t, raw.k, raw.class_sizes, std::move(edges));
}

RawInstance PartiteHypergraph::to_raw() const {
  RawInstance raw{t_, k_, class_sizes_, {}};
  raw.edges.reserve(edge_count());
  for (std::size_t e = 0; e < edge_count(); ++e) {
    std::vector<VertexId> ids;
    for (Vertex v : edge(e)) ids.push_back(id(v));
    raw.edges.push_back(std::move(ids));
  }
  return raw;
}

std::uint32_t PartiteHypergraph::n() const {
  if (!balanced_) throw std::logic_error("PartiteHypergraph::n on an unbalanced instance");
  return class_sizes_.front();
}

bool PartiteHypergraph::is_legal(std::span<const Vertex> vertices) const {
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i] <= vertices[i - 1] || class_of(vertices[i]) == class_of(vertices[i - 1])) return false;
  }
  return true;
}

LegalSet PartiteHypergraph::legal_set(std::vector<Vertex> vertices) const {
  std::sort(vertices.begin(), vertices.end());
  for (Vertex v : vertices) {
    if (v >= vertex_count_) throw std::invalid_argument("legal_set: vertex out of range");
  }
  if (!is_legal(vertices)) throw std::invalid_argument("legal_set: set meets a class twice");
  LegalSet out;
  out.classes.reserve(vertices.size());
  for (Vertex v : vertices) out.classes.push_back(class_of(v));
  out.vertices = std::move(vertices);
  return out;
}

std::size_t PartiteHypergraph::link_slot(std::span<const Vertex> set, ClassIndex cls) const {
  std::uint32_t mask = 0;
  std::size_t r = 0;
  for (Vertex v : set) {
    const ClassIndex c = class_of(v);
    mask |= 1U << c;
    r = r * class_sizes_[c] + index_in_class(v);
  }
  std::size_t pos = 0;
  for (ClassIndex j = 0; j < cls; ++j) {
    if (!(mask >> j & 1U)) ++pos;
  }
  return combo_base_[mask] + r * (t_ - (k_ - 1)) + pos;
}

const Bitset& PartiteHypergraph::link(std::span<const Vertex> set, ClassIndex cls) const {
  return links_[link_slot(set, cls)];
}

bool PartiteHypergraph::has_edge(std::span<const Vertex> vertices) const {
  if (vertices.size() != k_) return false;
  const Vertex last = vertices.back();
  return link(vertices.first(k_ - 1), class_of(last)).test(index_in_class(last));
}

PartiteHypergraph::Induced PartiteHypergraph::induced(std::span<const Vertex> keep) const {
  std::vector<std::uint32_t> sizes(t_, 0);
  constexpr Vertex kDropped = ~Vertex{0};
  std::vector<Vertex> remap(vertex_count_, kDropped);
  std::vector<Vertex> to_host;
  to_host.reserve(keep.size());
  // Keep is sorted, so new ids stay class-contiguous.
  for (Vertex v : keep) {
    remap[v] = static_cast<Vertex>(to_host.size());
    to_host.push_back(v);
    ++sizes[class_of(v)];
  }
  std::vector<std::vector<Vertex>> edges;
  std::vector<Vertex> mapped(k_);
  for (std::size_t e = 0; e < edge_count(); ++e) {
    bool inside = true;
    std::size_t i = 0;
    for (Vertex v : edge(e)) {
      if (remap[v] == kDropped) {
        inside = false;
        break;
      }
      mapped[i++] = remap[v];
    }
    if (inside) edges.push_back(mapped);
  }
  return {PartiteHypergraph(t_, k_, std::move(sizes), std::move(edges)), std::move(to_host)};
}

std::size_t codegree(const PartiteHypergraph& h, const LegalSet& set, const ClassSet& J) {
  if (set.vertices.empty()) throw std::invalid_argument("codegree: empty set");
  if (set.vertices.size() + J.size() != h.k()) throw std::invalid_argument("codegree: |T| + |J| != k");
  std::uint32_t mask_i = 0;
  for (Vertex v : set.vertices) mask_i |= 1U << h.class_of(v);
  std::uint32_t mask_j = 0;
  for (ClassIndex c : J) {
    if (c >= h.t()) throw std::invalid_argument("codegree: class index out of range");
    if ((mask_i | mask_j) >> c & 1U) throw std::invalid_argument("codegree: J meets T's classes");
    mask_j |= 1U << c;
  }
  if (!h.is_legal(set.vertices)) throw std::invalid_argument("codegree: T is not legal");
  if (J.size() == 1) return h.link(set.vertices, J.front()).count();
  std::size_t count = 0;
  for (auto e : h.incident_edges(set.vertices.front())) {
    auto ev = h.edge(e);
    std::uint32_t mask = 0;
    for (Vertex v : ev) mask |= 1U << h.class_of(v);
    if (mask != (mask_i | mask_j)) continue;
    if (std::includes(ev.begin(), ev.end(), set.vertices.begin(), set.vertices.end())) ++count;
  }
  return count;
}

CodegreeReport min_codegree(const PartiteHypergraph& h, std::uint32_t level) {
  if (level < 1 || level >= h.k()) throw std::invalid_argument("min_codegree: need 1 <= l <= k-1");
  const std::uint32_t t = h.t();
  const std::uint32_t k = h.k();
  const auto class_combos = combinations(t, level);

  struct Cell {
    ClassSet I;
    std::vector<ClassSet> Js;
    std::vector<std::vector<std::size_t>> counts;  // [J][mixed-radix T]
  };
  std::vector<Cell> cells;
  std::unordered_map<std::uint32_t, std::size_t> cell_of_mask;
  for (const auto& I : class_combos) {
    Cell cell;
    cell.I = I;
    std::uint64_t size = 1;
    std::uint32_t mask = 0;
    for (auto c : I) {
      size *= h.class_size(c);
      mask |= 1U << c;
    }
    ClassSet rest;
    for (ClassIndex c = 0; c < t; ++c) {
      if (!(mask >> c & 1U)) rest.push_back(c);
    }
    for (const auto& pick : combinations(static_cast<std::uint32_t>(rest.size()), k - level)) {
      ClassSet J;
      for (auto p : pick) J.push_back(rest[p]);
      cell.Js.push_back(std::move(J));
      cell.counts.emplace_back(size, 0);
    }
    cell_of_mask[mask] = cells.size();
    cells.push_back(std::move(cell));
  }

  const auto positions = combinations(k, level);
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto ev = h.edge(e);
    for (const auto& pos : positions) {
      std::uint32_t mask = 0;
      std::size_t r = 0;
      for (auto p : pos) {
        const ClassIndex c = h.class_of(ev[p]);
        mask |= 1U << c;
        r = r * h.class_size(c) + h.index_in_class(ev[p]);
      }
      auto& cell = cells[cell_of_mask.at(mask)];
      ClassSet J;
      std::size_t pi = 0;
      for (std::uint32_t i = 0; i < k; ++i) {
        if (pi < pos.size() && pos[pi] == i) {
          ++pi;
        } else {
          J.push_back(h.class_of(ev[i]));
        }
      }
      const auto j = static_cast<std::size_t>(std::find(cell.Js.begin(), cell.Js.end(), J) - cell.Js.begin());
      ++cell.counts[j][r];
    }
  }

  CodegreeReport report;
  report.level = level;
  bool any = false;
  for (const auto& cell : cells) {
    const std::size_t size = cell.counts.empty() ? 0 : cell.counts.front().size();
    std::size_t local_min = SIZE_MAX;
    std::size_t best_r = 0;
    std::size_t best_j = 0;
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t j = 0; j < cell.Js.size(); ++j) {
        if (cell.counts[j][r] < local_min) {
          local_min = cell.counts[j][r];
          best_r = r;
          best_j = j;
        }
      }
    }
    if (local_min == SIZE_MAX) {
      report.per_class_set.push_back({cell.I, 0});
      continue;
    }
    report.per_class_set.push_back({cell.I, local_min});
    if (!any || local_min < report.overall) {
      any = true;
      report.overall = local_min;
      std::vector<Vertex> witness(cell.I.size());
      std::size_t r = best_r;
      for (std::size_t i = cell.I.size(); i-- > 0;) {
        const auto size_c = h.class_size(cell.I[i]);
        witness[i] = h.vertex(cell.I[i], static_cast<std::uint32_t>(r % size_c));
        r /= size_c;
      }
      report.witness_set = h.legal_set(std::move(witness));
      report.witness_classes = cell.Js[best_j];
    }
  }
  return report;
}

namespace {

// Class-ordered backtracking. cand[d][j] holds the admissible within-class
// indices of class j given the vertices picked in classes < d.
class CliqueWalker {
 public:
  CliqueWalker(const PartiteHypergraph& h, const Bitset* within) : h_(h) {
    const std::uint32_t t = h.t();
    cand_.assign(t + 1, std::vector<Bitset>(t));
    for (ClassIndex j = 0; j < t; ++j) {
      Bitset b(h.class_size(j), within == nullptr);
      if (within != nullptr) {
        for (std::uint32_t i = 0; i < h.class_size(j); ++i) {
          if (within->test(h.vertex(j, i))) b.set(i);
        }
      }
      cand_[0][j] = std::move(b);
    }
    // (k-2)-subsets of the earlier positions, per depth.
    subsets_.resize(t);
    for (std::uint32_t d = 0; d < t; ++d) {
      if (d + 1 >= h.k() - 1) subsets_[d] = combinations(d, h.k() - 2);
    }
    chosen_.resize(t);
    scratch_.resize(h.k() - 1);
  }

  template <typename Fn>
  bool run(Fn&& fn) {
    return descend(0, fn);
  }

 private:
  template <typename Fn>
  bool descend(std::uint32_t d, Fn& fn) {
    const std::uint32_t t = h_.t();
    const auto& here = cand_[d][d];
    for (std::size_t i = here.find_first(); i < here.size(); i = here.find_next(i + 1)) {
      const Vertex v = h_.vertex(d, static_cast<std::uint32_t>(i));
      chosen_[d] = v;
      if (d + 1 == t) {
        if (!fn(std::span<const Vertex>(chosen_))) return false;
        continue;
      }
      bool alive = true;
      for (ClassIndex j = d + 1; j < t; ++j) cand_[d + 1][j] = cand_[d][j];
      for (const auto& subset : subsets_[d]) {
        std::size_t r = 0;
        for (auto p : subset) scratch_[r++] = chosen_[p];
        scratch_[r] = v;
        for (ClassIndex j = d + 1; j < t; ++j) {
          cand_[d + 1][j] &= h_.link(scratch_, j);
        }
      }
      for (ClassIndex j = d + 1; j < t && alive; ++j) alive = cand_[d + 1][j].any();
      if (alive && !descend(d + 1, fn)) return false;
    }
    return true;
  }

  const PartiteHypergraph& h_;
  std::vector<std::vector<Bitset>> cand_;
  std::vector<std::vector<std::vector<std::uint32_t>>> subsets_;
  std::vector<Vertex> chosen_;
  std::vector<Vertex> scratch_;
};

}  // namespace

CliqueList enumerate_cliques(const PartiteHypergraph& h, std::optional<std::size_t> cap, const Bitset* within) {
  CliqueList out;
  for (ClassIndex c = 0; c < h.t(); ++c) {
    if (h.class_size(c) == 0) return out;
  }
  CliqueWalker walker(h, within);
  walker.run([&](std::span<const Vertex> clique) {
    if (cap && out.cliques.size() >= *cap) {
      out.truncated = true;
      return false;
    }
    out.cliques.emplace_back(clique.begin(), clique.end());
    return true;
  });
  return out;
}

bool is_clique(const PartiteHypergraph& h, std::span<const Vertex> vertices) {
  if (vertices.size() != h.t() || !h.is_legal(vertices)) return false;
  std::vector<Vertex> sub(h.k());
  for (const auto& pick : combinations(h.t(), h.k())) {
    for (std::size_t i = 0; i < pick.size(); ++i) sub[i] = vertices[pick[i]];
    if (!h.has_edge(sub)) return false;
  }
  return true;
}

std::uint32_t TGraph::vertex_count() const {
  return std::accumulate(class_sizes.begin(), class_sizes.end(), 0U);
}

TGraph auxiliary_clique_graph(const PartiteHypergraph& h) {
  return {h.t(), h.class_sizes(), enumerate_cliques(h).cliques};
}

std::size_t Matching::covered() const {
  std::size_t total = 0;
  for (const auto& c : cliques) total += c.size();
  return total;
}

MatchingReport verify_matching(const PartiteHypergraph& h, const Matching& m) {
  MatchingReport report;
  std::vector<bool> used(h.vertex_count(), false);
  for (std::size_t i = 0; i < m.cliques.size(); ++i) {
    const auto& c = m.cliques[i];
    bool in_range = std::all_of(c.begin(), c.end(), [&](Vertex v) { return v < h.vertex_count(); });
    if (!in_range || !is_clique(h, c)) {
      report.valid = false;
      report.problems.push_back("member " + std::to_string(i) + " is not a K_t^k of the host");
      continue;
    }
    for (Vertex v : c) {
      if (used[v]) {
        report.valid = false;
        report.problems.push_back("vertex " + std::to_string(v) + " covered twice");
      }
      used[v] = true;
    }
  }
  report.covered = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  report.uncovered = h.vertex_count() - report.covered;
  report.perfect = report.valid && report.uncovered == 0;
  return report;
}

}  // namespace cliquefactor

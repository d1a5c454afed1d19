#include "cliquefactor/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "cliquefactor/approx.hpp"
#include "cliquefactor/errors.hpp"

namespace cliquefactor {

namespace {

bool contains_sorted(std::span<const Vertex> edge, std::span<const Vertex> set) {
  return std::includes(edge.begin(), edge.end(), set.begin(), set.end());
}

double factorial(std::uint32_t m) {
  double f = 1;
  for (std::uint32_t i = 2; i <= m; ++i) f *= i;
  return f;
}

std::uint32_t class_mask(std::span<const Vertex> vertices, const std::vector<ClassIndex>& assignment, bool& legal) {
  std::uint32_t mask = 0;
  legal = true;
  for (Vertex v : vertices) {
    const std::uint32_t bit = 1U << assignment[v];
    if (mask & bit) legal = false;
    mask |= bit;
  }
  return mask;
}

// Edges of h containing the sorted set (all edges when it is empty).
template <typename Fn>
void for_each_edge_containing(const GeneralHypergraph& h, std::span<const Vertex> set, Fn&& fn) {
  if (set.empty()) {
    for (std::size_t e = 0; e < h.edge_count(); ++e) fn(h.edge(e));
    return;
  }
  Vertex pivot = set.front();
  for (Vertex v : set) {
    if (h.incident_edges(v).size() < h.incident_edges(pivot).size()) pivot = v;
  }
  for (std::uint32_t e : h.incident_edges(pivot)) {
    if (contains_sorted(h.edge(e), set)) fn(h.edge(e));
  }
}

// l-sets to audit: all of them when n is small, else `samples` random ones.
std::vector<std::vector<Vertex>> audit_sets(std::uint32_t n, std::uint32_t level, bool exhaustive, std::size_t samples,
                                            Rng& rng) {
  if (exhaustive) return combinations(n, level);
  std::set<std::vector<Vertex>> picked;
  for (std::size_t s = 0; s < samples; ++s) picked.insert(rng.sample_sorted(n, level));
  return {picked.begin(), picked.end()};
}

}  // namespace

GeneralHypergraph::GeneralHypergraph(std::uint32_t n, std::uint32_t k, std::vector<std::vector<Vertex>> edges)
    : n_(n), k_(k) {
  if (k < 1) throw std::invalid_argument("uniformity must be positive");
  for (auto& e : edges) {
    if (e.size() != k) throw std::invalid_argument("edge with " + std::to_string(e.size()) + " vertices, expected " +
                                                   std::to_string(k));
    std::sort(e.begin(), e.end());
    if (e.back() >= n) throw std::invalid_argument("vertex " + std::to_string(e.back()) + " out of range");
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw std::invalid_argument("edge repeats a vertex");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw std::invalid_argument("duplicate edge");
  for (const auto& e : edges) edges_.insert(edges_.end(), e.begin(), e.end());

  incidence_begin_.assign(n + 1, 0);
  for (Vertex v : edges_) ++incidence_begin_[v + 1];
  for (std::uint32_t v = 0; v < n; ++v) incidence_begin_[v + 1] += incidence_begin_[v];
  incidence_.resize(edges_.size());
  auto fill = incidence_begin_;
  for (std::size_t e = 0; e < edge_count(); ++e) {
    for (Vertex v : edge(e)) incidence_[fill[v]++] = static_cast<std::uint32_t>(e);
  }
}

bool GeneralHypergraph::has_edge(std::span<const Vertex> vertices) const {
  if (vertices.size() != k_) return false;
  std::size_t lo = 0;
  std::size_t hi = edge_count();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto e = edge(mid);
    if (std::lexicographical_compare(e.begin(), e.end(), vertices.begin(), vertices.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < edge_count() && std::equal(vertices.begin(), vertices.end(), edge(lo).begin());
}

std::size_t GeneralHypergraph::degree(std::span<const Vertex> set) const {
  std::size_t d = 0;
  for_each_edge_containing(*this, set, [&](std::span<const Vertex>) { ++d; });
  return d;
}

std::vector<std::vector<Vertex>> GeneralHypergraph::link(std::span<const Vertex> set) const {
  std::vector<std::vector<Vertex>> out;
  for_each_edge_containing(*this, set, [&](std::span<const Vertex> e) {
    std::vector<Vertex> rest;
    std::set_difference(e.begin(), e.end(), set.begin(), set.end(), std::back_inserter(rest));
    out.push_back(std::move(rest));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t GeneralHypergraph::min_degree(std::uint32_t level) const {
  if (level > k_) throw std::invalid_argument("min_degree: level exceeds uniformity");
  if (level > n_) return 0;
  std::map<std::vector<Vertex>, std::size_t> counts;
  const auto picks = combinations(k_, level);
  std::vector<Vertex> sub(level);
  for (std::size_t e = 0; e < edge_count(); ++e) {
    const auto edge_vertices = edge(e);
    for (const auto& pick : picks) {
      for (std::uint32_t i = 0; i < level; ++i) sub[i] = edge_vertices[pick[i]];
      ++counts[sub];
    }
  }
  if (counts.size() < binomial(n_, level)) return 0;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& [set, count] : counts) best = std::min(best, count);
  return best;
}

std::vector<std::vector<std::vector<Vertex>>> decompose_link(const GeneralHypergraph& h, std::span<const Vertex> set) {
  std::vector<std::vector<std::vector<Vertex>>> matchings;
  std::vector<std::vector<bool>> used;  // per colour, the vertices it covers
  for (auto& e : h.link(set)) {
    std::size_t colour = 0;
    for (; colour < matchings.size(); ++colour) {
      if (std::none_of(e.begin(), e.end(), [&](Vertex v) { return used[colour][v]; })) break;
    }
    if (colour == matchings.size()) {
      matchings.emplace_back();
      used.emplace_back(h.n(), false);
    }
    for (Vertex v : e) used[colour][v] = true;
    matchings[colour].push_back(std::move(e));
  }
  return matchings;
}

PreservationReport verify_degree_preservation(const GeneralHypergraph& h, const PartitionResult& result,
                                              std::size_t exhaustive_limit, Seed seed) {
  PreservationReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const std::uint32_t n = h.n();
  const std::uint32_t k = h.k();
  const std::uint32_t t = result.t;
  const double ln_n = std::log(static_cast<double>(n));

  std::uint64_t total_checks = 0;
  for (std::uint32_t l = 1; l < k; ++l) total_checks += binomial(n, l) * binomial(t, k - l);
  report.exhaustive = total_checks <= exhaustive_limit;
  constexpr std::size_t kSampledSets = 10'000;
  Rng rng(derive_seed(seed, "degree-preservation"));

  std::map<std::uint32_t, std::size_t> by_mask;
  for (std::uint32_t l = 1; l < k; ++l) {
    const std::uint32_t m = k - l;
    const double scale = std::pow(static_cast<double>(t), m) / factorial(m);
    const double slack = 2.0 * std::sqrt(t * ln_n) * std::pow(static_cast<double>(n), m - 0.5);
    for (const auto& set : audit_sets(n, l, report.exhaustive, kSampledSets, rng)) {
      bool legal = true;
      const std::uint32_t own = class_mask(set, result.assignment, legal);
      if (!legal) continue;
      by_mask.clear();
      std::size_t host_degree = 0;
      for_each_edge_containing(h, set, [&](std::span<const Vertex> e) {
        ++host_degree;
        std::vector<Vertex> rest;
        std::set_difference(e.begin(), e.end(), set.begin(), set.end(), std::back_inserter(rest));
        bool rest_legal = true;
        const std::uint32_t mask = class_mask(rest, result.assignment, rest_legal);
        if (rest_legal && (mask & own) == 0) ++by_mask[mask];
      });
      for (const auto& pick : combinations(t, m)) {
        std::uint32_t mask = 0;
        for (auto c : pick) mask |= 1U << c;
        if (mask & own) continue;
        const double lhs = scale * static_cast<double>(by_mask.count(mask) ? by_mask[mask] : 0);
        const double rhs = static_cast<double>(host_degree) - slack;
        ++report.checked;
        if (lhs < rhs) ++report.violations;
        if (lhs - rhs < report.worst_margin) {
          report.worst_margin = lhs - rhs;
          report.worst_set = set;
          report.worst_classes = ClassSet(pick.begin(), pick.end());
          report.worst_lhs = lhs;
          report.worst_rhs = rhs;
        }
      }
    }
  }
  return report;
}

PartitionResult random_equipartition(const GeneralHypergraph& h, const PartitionConfig& cfg) {
  const std::uint32_t n = h.n();
  const std::uint32_t k = h.k();
  const std::uint32_t t = cfg.t;
  if (t < k) throw std::invalid_argument("random_equipartition: need t >= k for any legal edge");
  if (t > 16) throw std::invalid_argument("random_equipartition: at most 16 classes");
  if (n == 0 || n % t != 0) throw std::invalid_argument("random_equipartition: t must divide n");
  const std::uint32_t size = n / t;
  const double ln_n = std::log(static_cast<double>(n));
  const double move_budget = std::sqrt(static_cast<double>(n)) * std::pow(ln_n, 0.25);
  const bool exhaustive = n <= cfg.exhaustive_audit_limit;

  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(cfg.max_retries, 1); ++attempt) {
    Rng rng(derive_seed(cfg.seed, "equipartition", attempt));
    std::vector<ClassIndex> assignment(n);
    std::vector<std::uint32_t> sizes(t, 0);
    for (Vertex v = 0; v < n; ++v) {
      assignment[v] = static_cast<ClassIndex>(rng.below(t));
      ++sizes[assignment[v]];
    }
    std::size_t excess = 0;
    for (auto s : sizes) excess += s > size ? s - size : 0;
    if (static_cast<double>(excess) > move_budget) continue;

    // Badness audit on the sampled classes.
    DecompositionStats decomposition;
    decomposition.exhaustive = exhaustive;
    Rng audit_rng(derive_seed(cfg.seed, "equipartition-audit", attempt));
    for (std::uint32_t l = 1; l < k; ++l) {
      const std::uint32_t m = k - l;
      const double fact = factorial(m) / std::pow(static_cast<double>(t), m);
      const auto js = combinations(t, m);
      for (auto& set : audit_sets(n, l, exhaustive, cfg.audit_samples, audit_rng)) {
        DecompositionStats::Entry entry;
        entry.set = std::move(set);
        entry.worst_slack = std::numeric_limits<double>::infinity();
        const auto matchings = decompose_link(h, entry.set);
        for (std::size_t i = 0; i < matchings.size(); ++i) {
          entry.matching_sizes.push_back(matchings[i].size());
          const double mu = fact * static_cast<double>(matchings[i].size());
          const double threshold = (1.0 - std::sqrt(2.0 * (2.0 * k - 1.0) * ln_n / mu)) * mu;
          std::map<std::uint32_t, std::size_t> good;
          for (const auto& e : matchings[i]) {
            bool legal = true;
            const std::uint32_t mask = class_mask(e, assignment, legal);
            if (legal) ++good[mask];
          }
          for (const auto& pick : js) {
            std::uint32_t mask = 0;
            for (auto c : pick) mask |= 1U << c;
            const std::size_t x = good.count(mask) ? good[mask] : 0;
            const double slack = static_cast<double>(x) - threshold;
            if (slack < entry.worst_slack) {
              entry.worst_slack = slack;
              entry.worst_matching = i;
              entry.worst_classes = ClassSet(pick.begin(), pick.end());
              entry.worst_mu = mu;
              entry.worst_x = x;
            }
            if (static_cast<double>(x) <= threshold) entry.bad = true;
          }
        }
        decomposition.bad_sets += entry.bad;
        decomposition.entries.push_back(std::move(entry));
      }
    }
    if (decomposition.bad_sets > 0) continue;

    // Redistribute: smallest ids of the largest class go to the smallest class.
    std::vector<std::uint32_t> sampled = sizes;
    std::vector<std::set<Vertex>> members(t);
    for (Vertex v = 0; v < n; ++v) members[assignment[v]].insert(v);
    std::size_t moved = 0;
    while (true) {
      const auto largest = static_cast<ClassIndex>(
          std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      const auto smallest = static_cast<ClassIndex>(
          std::min_element(sizes.begin(), sizes.end()) - sizes.begin());
      if (sizes[largest] == size) break;
      const Vertex v = *members[largest].begin();
      members[largest].erase(members[largest].begin());
      members[smallest].insert(v);
      assignment[v] = smallest;
      --sizes[largest];
      ++sizes[smallest];
      ++moved;
    }

    std::vector<std::vector<Vertex>> classes(t);
    std::vector<Vertex> to_host;
    std::vector<Vertex> to_partite(n);
    for (ClassIndex c = 0; c < t; ++c) {
      classes[c].assign(members[c].begin(), members[c].end());
      for (Vertex v : classes[c]) {
        to_partite[v] = static_cast<Vertex>(to_host.size());
        to_host.push_back(v);
      }
    }
    std::vector<std::vector<Vertex>> partite_edges;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      bool legal = true;
      class_mask(h.edge(e), assignment, legal);
      if (!legal) continue;
      std::vector<Vertex> mapped;
      for (Vertex v : h.edge(e)) mapped.push_back(to_partite[v]);
      partite_edges.push_back(std::move(mapped));
    }

    PartitionResult result{
        .t = t,
        .assignment = std::move(assignment),
        .classes = std::move(classes),
        .partite = PartiteHypergraph(t, k, std::vector<std::uint32_t>(t, size), std::move(partite_edges)),
        .to_host = std::move(to_host),
        .sampled_sizes = std::move(sampled),
        .moved = moved,
        .attempts = attempt + 1,
        .decomposition = std::move(decomposition),
        .preservation = {},
    };
    result.preservation = verify_degree_preservation(h, result, 2'000'000, derive_seed(cfg.seed, "audit", attempt));
    if (!result.preservation.holds()) continue;
    return result;
  }
  throw RetriesExhausted("random_equipartition: no acceptable partition in " + std::to_string(cfg.max_retries) +
                         " attempts");
}

std::vector<std::string> verify_general_matching(const GeneralHypergraph& h, std::uint32_t t, const Matching& m) {
  std::vector<std::string> problems;
  std::vector<bool> used(h.n(), false);
  for (std::size_t i = 0; i < m.cliques.size(); ++i) {
    auto c = m.cliques[i];
    std::sort(c.begin(), c.end());
    if (c.size() != t || std::adjacent_find(c.begin(), c.end()) != c.end() || (!c.empty() && c.back() >= h.n())) {
      problems.push_back("member " + std::to_string(i) + " is not a t-set of vertices");
      continue;
    }
    std::vector<Vertex> sub(h.k());
    for (const auto& pick : combinations(t, h.k())) {
      for (std::size_t j = 0; j < pick.size(); ++j) sub[j] = c[pick[j]];
      if (!h.has_edge(sub)) {
        problems.push_back("member " + std::to_string(i) + " misses an edge");
        break;
      }
    }
    for (Vertex v : c) {
      if (used[v]) problems.push_back("vertex " + std::to_string(v) + " covered twice");
      used[v] = true;
    }
  }
  return problems;
}

CoverResult cover_almost_all(const GeneralHypergraph& h, std::uint32_t t, const ApproxConfig& approx,
                             const PartitionConfig& partition) {
  PartitionConfig pcfg = partition;
  pcfg.t = t;
  auto part = random_equipartition(h, pcfg);
  const auto found = almost_perfect_factor(part.partite, approx);
  Matching matching;
  for (const auto& c : found.matching.cliques) {
    Clique host;
    for (Vertex v : c) host.push_back(part.to_host[v]);
    std::sort(host.begin(), host.end());
    matching.cliques.push_back(std::move(host));
  }
  std::sort(matching.cliques.begin(), matching.cliques.end());
  const std::size_t uncovered = h.n() - matching.covered();
  auto problems = verify_general_matching(h, t, matching);
  const bool within = static_cast<double>(uncovered) <= approx.epsilon * h.n();
  return CoverResult{std::move(part), std::move(matching), uncovered, within, std::move(problems)};
}

}  // namespace cliquefactor

#include "cliquefactor/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "cliquefactor/errors.hpp"
#include "cliquefactor/parallel.hpp"

namespace cliquefactor {

namespace {

constexpr std::size_t kUndershootLimit = 10'000;

std::vector<Vertex> draw_copy(const PartiteHypergraph& h, const ApproxParams& params, Rng& rng,
                              std::size_t& undershoots) {
  std::vector<Vertex> copy;
  std::vector<Vertex> pool;
  for (ClassIndex c = 0; c < h.t(); ++c) {
    std::size_t tries = 0;
    while (true) {
      pool.clear();
      for (std::uint32_t i = 0; i < h.class_size(c); ++i) {
        if (rng.bernoulli(params.copy_prob)) pool.push_back(h.vertex(c, i));
      }
      if (pool.size() >= params.trimmed_size) break;
      ++undershoots;
      if (++tries > kUndershootLimit) throw RetriesExhausted("copy sampling: binomial draws keep undershooting m");
    }
    for (auto i : rng.sample_sorted(static_cast<std::uint32_t>(pool.size()), params.trimmed_size)) {
      copy.push_back(pool[i]);
    }
  }
  return copy;
}

std::uint64_t pair_key(Vertex a, Vertex b) { return (std::uint64_t{a} << 32) | b; }

}  // namespace

ApproxConfig ApproxConfig::desk(std::uint32_t t, std::uint32_t n, double target_degree) {
  ApproxConfig cfg;
  const std::uint32_t m = std::min(n, 2 * t);
  cfg.trimmed_size = m;
  cfg.copy_prob = std::min(1.0, 2.0 * m / n);
  cfg.copy_count = static_cast<std::size_t>(std::ceil(target_degree * n / m));
  return cfg;
}

ApproxParams resolve_params(const ApproxConfig& cfg, std::uint32_t n) {
  ApproxParams p;
  const double nd = n;
  p.copy_prob = cfg.copy_prob.value_or(std::pow(nd, -0.9));
  p.trimmed_size = cfg.trimmed_size.value_or(
      static_cast<std::uint32_t>(std::max(1.0, std::floor(std::pow(nd, 0.1) - std::pow(nd, 0.075)))));
  p.copy_count = cfg.copy_count.value_or(static_cast<std::size_t>(std::llround(std::pow(nd, 1.1))));
  if (!(p.copy_prob > 0 && p.copy_prob <= 1)) throw std::invalid_argument("copy probability outside (0,1]");
  if (p.trimmed_size < 1 || p.trimmed_size > n) throw std::invalid_argument("trimmed size outside [1, n]");
  if (p.copy_count < 1) throw std::invalid_argument("copy count must be positive");
  if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) throw std::invalid_argument("epsilon outside (0,1)");
  return p;
}

double fractional_threshold_ratio(std::uint32_t t, std::uint32_t k, std::uint32_t m) {
  if (k == 2) return std::ceil(static_cast<double>(t - 1) * m / t) / m;
  const double c = static_cast<double>(binomial(t - 1, k - 1));
  return (std::ceil((1.0 - 1.0 / c) * m) + 1.0) / m;
}

CopyFamilyStats copy_family_stats(const PartiteHypergraph& h, const std::vector<std::vector<Vertex>>& copies,
                                  const ApproxConfig& cfg) {
  CopyFamilyStats stats;
  stats.membership.assign(h.vertex_count(), 0);
  std::unordered_map<std::uint64_t, std::size_t> pairs;
  std::map<std::array<Vertex, 3>, std::size_t> triples;
  for (const auto& copy : copies) {
    for (Vertex v : copy) ++stats.membership[v];
    for (std::size_t a = 0; a < copy.size(); ++a) {
      for (std::size_t b = a + 1; b < copy.size(); ++b) {
        ++pairs[pair_key(copy[a], copy[b])];
        for (std::size_t c = b + 1; c < copy.size(); ++c) ++triples[{copy[a], copy[b], copy[c]}];
      }
    }
  }
  for (const auto& [key, count] : pairs) stats.pairs_in_three_or_more += count >= 3;
  for (const auto& [key, count] : triples) stats.triples_in_two_or_more += count >= 2;

  for (const auto& copy : copies) {
    const auto sub = h.induced(copy);
    const std::uint32_t m = static_cast<std::uint32_t>(copy.size() / h.t());
    const std::size_t min_deg = min_codegree(sub.graph, h.k() - 1).overall;
    const double needed = (fractional_threshold_ratio(h.t(), h.k(), m) + cfg.gamma / 4) * m;
    stats.copy_min_codegree.push_back(min_deg);
    const bool flag = static_cast<double>(min_deg) < needed;
    stats.flagged.push_back(flag);
    stats.flagged_count += flag;
  }
  return stats;
}

CopySample sample_copies(const PartiteHypergraph& h, const ApproxConfig& cfg) {
  if (!h.balanced()) throw std::invalid_argument("sample_copies: instance is not balanced");
  const auto params = resolve_params(cfg, h.n());
  Rng rng(derive_seed(cfg.seed, "copies"));
  CopySample sample;
  std::size_t undershoots = 0;
  for (std::size_t i = 0; i < params.copy_count; ++i) sample.copies.push_back(draw_copy(h, params, rng, undershoots));
  sample.stats = copy_family_stats(h, sample.copies, cfg);
  sample.stats.redraws = undershoots;
  if (static_cast<double>(sample.stats.flagged_count) > cfg.max_flagged_fraction * params.copy_count) {
    throw RetriesExhausted("sample_copies: " + std::to_string(sample.stats.flagged_count) + " of " +
                           std::to_string(params.copy_count) + " copies fail the codegree check");
  }
  return sample;
}

SparseGraph build_sparse_tgraph(const PartiteHypergraph& h, const std::vector<std::vector<Vertex>>& copies,
                                const std::vector<FractionalAssignment>& solutions, Seed seed) {
  if (solutions.size() != copies.size()) throw std::invalid_argument("build_sparse_tgraph: one solution per copy");
  std::vector<Bitset> member;
  for (const auto& copy : copies) {
    Bitset b(h.vertex_count());
    for (Vertex v : copy) b.set(v);
    member.push_back(std::move(b));
  }
  auto inside = [&](std::size_t i, const Clique& c) {
    return std::all_of(c.begin(), c.end(), [&](Vertex v) { return v < h.vertex_count() && member[i].test(v); });
  };

  // Re-verify each solution as a perfect fractional matching of its copy.
  for (std::size_t i = 0; i < copies.size(); ++i) {
    const auto& sol = solutions[i];
    std::map<Vertex, Rational> load;
    Rational size = 0;
    bool ok = sol.cliques.size() == sol.weights.size();
    for (std::size_t j = 0; ok && j < sol.cliques.size(); ++j) {
      const auto& w = sol.weights[j];
      ok = inside(i, sol.cliques[j]) && is_clique(h, sol.cliques[j]) && sgn(w) >= 0 && w <= 1;
      for (Vertex v : sol.cliques[j]) load[v] += w;
      size += w;
    }
    ok = ok && load.size() == copies[i].size() &&
         std::all_of(load.begin(), load.end(), [](const auto& e) { return e.second == 1; }) &&
         size * h.t() == Rational(static_cast<long>(copies[i].size()));
    if (!ok) throw std::invalid_argument("build_sparse_tgraph: solution " + std::to_string(i) + " is not perfect");
  }

  SparseGraph out;
  out.graph.t = h.t();
  out.graph.class_sizes = h.class_sizes();
  std::map<Clique, bool> counted;
  for (std::size_t i = 0; i < copies.size(); ++i) {
    Rng rng(derive_seed(seed, "sparse-tgraph", i));
    for (std::size_t j = 0; j < solutions[i].cliques.size(); ++j) {
      const auto& clique = solutions[i].cliques[j];
      std::size_t owner = i;
      std::size_t containing = 0;
      for (std::size_t c = 0; c < copies.size(); ++c) {
        if (!inside(c, clique)) continue;
        ++containing;
        owner = std::min(owner, c);
      }
      if (containing > 1 && counted.emplace(clique, true).second) ++out.multi_copy_cliques;
      const bool keep = rng.bernoulli(solutions[i].weights[j].get_d());
      if (owner == i && keep) out.graph.edges.push_back(clique);
    }
  }
  std::sort(out.graph.edges.begin(), out.graph.edges.end());
  return out;
}

RegularityStats regularity_stats(const TGraph& g) {
  RegularityStats s;
  const std::uint32_t vertices = g.vertex_count();
  std::vector<std::size_t> deg(vertices, 0);
  std::unordered_map<std::uint64_t, std::size_t> pair_deg;
  for (const auto& e : g.edges) {
    for (std::size_t a = 0; a < e.size(); ++a) {
      ++deg[e[a]];
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        s.max_pair_degree = std::max(s.max_pair_degree, ++pair_deg[pair_key(e[a], e[b])]);
      }
    }
  }
  if (vertices == 0) return s;
  s.min_degree = *std::min_element(deg.begin(), deg.end());
  s.max_degree = *std::max_element(deg.begin(), deg.end());
  s.mean_degree = static_cast<double>(g.t) * static_cast<double>(g.edges.size()) / vertices;
  if (s.mean_degree > 0) {
    s.tau_defined = true;
    for (auto d : deg) s.tau = std::max(s.tau, std::abs(static_cast<double>(d) - s.mean_degree) / s.mean_degree);
  }
  return s;
}

std::size_t improve_matching(const std::vector<Clique>& edges, std::uint32_t vertex_count,
                             std::vector<std::size_t>& chosen, std::size_t steps, Rng& rng) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> through(vertex_count);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (Vertex v : edges[e]) through[v].push_back(e);
  }
  // owner[v]: position in `chosen` of the member covering v.
  std::vector<std::size_t> owner(vertex_count, kNone);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (Vertex v : edges[chosen[i]]) owner[v] = i;
  }
  std::vector<Vertex> uncovered;
  std::vector<std::size_t> slot(vertex_count, kNone);
  for (Vertex v = 0; v < vertex_count; ++v) {
    if (owner[v] == kNone && !through[v].empty()) {
      slot[v] = uncovered.size();
      uncovered.push_back(v);
    }
  }
  auto cover = [&](std::size_t e) {
    chosen.push_back(e);
    for (Vertex v : edges[e]) {
      owner[v] = chosen.size() - 1;
      if (slot[v] != kNone) {
        const Vertex last = uncovered.back();
        uncovered[slot[v]] = last;
        slot[last] = slot[v];
        uncovered.pop_back();
        slot[v] = kNone;
      }
    }
  };
  auto uncover = [&](std::size_t pos) {
    for (Vertex v : edges[chosen[pos]]) {
      owner[v] = kNone;
      slot[v] = uncovered.size();
      uncovered.push_back(v);
    }
    // Move the last member into the freed position.
    const std::size_t last = chosen.size() - 1;
    if (pos != last) {
      chosen[pos] = chosen[last];
      for (Vertex v : edges[chosen[pos]]) owner[v] = pos;
    }
    chosen.pop_back();
  };
  auto free_edge_through = [&](Vertex v) -> std::size_t {
    for (std::size_t e : through[v]) {
      if (std::all_of(edges[e].begin(), edges[e].end(), [&](Vertex x) { return owner[x] == kNone; })) return e;
    }
    return kNone;
  };

  std::size_t used = 0;
  std::vector<std::size_t> swaps;
  for (; used < steps && !uncovered.empty(); ++used) {
    const Vertex u = uncovered[rng.below(uncovered.size())];
    if (const auto e = free_edge_through(u); e != kNone) {
      cover(e);
      continue;
    }
    // Edges through u blocked by exactly one member.
    swaps.clear();
    for (std::size_t e : through[u]) {
      std::size_t blocker = kNone;
      bool single = true;
      for (Vertex x : edges[e]) {
        if (owner[x] == kNone) continue;
        if (blocker == kNone) {
          blocker = owner[x];
        } else if (owner[x] != blocker) {
          single = false;
          break;
        }
      }
      if (single && blocker != kNone) swaps.push_back(e);
    }
    if (swaps.empty()) continue;
    const std::size_t e = swaps[rng.below(swaps.size())];
    std::size_t blocker = kNone;
    for (Vertex x : edges[e]) {
      if (owner[x] != kNone) blocker = owner[x];
    }
    const Clique freed = edges[chosen[blocker]];
    uncover(blocker);
    cover(e);
    for (Vertex v : freed) {
      if (owner[v] != kNone) continue;
      if (const auto f = free_edge_through(v); f != kNone) cover(f);
    }
  }
  return used;
}

NibbleResult nibble_matching(const TGraph& g, Seed seed, const NibbleOptions& options) {
  if (!(options.theta > 0 && options.theta <= 1)) throw std::invalid_argument("nibble: theta outside (0,1]");
  const std::uint32_t vertices = g.vertex_count();
  Rng rng(derive_seed(seed, "nibble"));
  NibbleResult out;
  std::vector<bool> alive(vertices, true);
  std::vector<std::size_t> live_edges(g.edges.size());
  for (std::size_t e = 0; e < live_edges.size(); ++e) live_edges[e] = e;
  std::vector<std::size_t> degree(vertices, 0);
  std::vector<std::uint32_t> hits(vertices, 0);
  std::size_t covered = 0;

  auto take = [&](std::size_t e) {
    out.edges.push_back(e);
    for (Vertex v : g.edges[e]) alive[v] = false;
    covered += g.t;
  };
  auto prune = [&] {
    std::erase_if(live_edges, [&](std::size_t e) {
      return !std::all_of(g.edges[e].begin(), g.edges[e].end(), [&](Vertex v) { return alive[v]; });
    });
  };

  const double tail = 1.0 / options.theta;
  std::vector<std::size_t> active;
  while (static_cast<double>(live_edges.size()) >= tail) {
    std::fill(degree.begin(), degree.end(), 0);
    for (std::size_t e : live_edges) {
      for (Vertex v : g.edges[e]) ++degree[v];
    }
    std::size_t touched = 0;
    std::size_t total = 0;
    for (Vertex v = 0; v < vertices; ++v) {
      if (degree[v] == 0) continue;
      ++touched;
      total += degree[v];
    }
    const double mean = static_cast<double>(total) / static_cast<double>(touched);
    const double p = std::min(1.0, options.theta / mean);

    active.clear();
    for (std::size_t e : live_edges) {
      if (rng.bernoulli(p)) active.push_back(e);
    }
    for (std::size_t e : active) {
      for (Vertex v : g.edges[e]) ++hits[v];
    }
    for (std::size_t e : active) {
      if (std::all_of(g.edges[e].begin(), g.edges[e].end(), [&](Vertex v) { return hits[v] == 1; })) take(e);
    }
    for (std::size_t e : active) {
      for (Vertex v : g.edges[e]) hits[v] = 0;
    }
    prune();
    ++out.rounds;
    out.uncovered_trace.push_back(vertices - covered);
  }

  // Greedy tail in edge order.
  for (std::size_t e : live_edges) {
    if (std::all_of(g.edges[e].begin(), g.edges[e].end(), [&](Vertex v) { return alive[v]; })) take(e);
  }
  out.uncovered_trace.push_back(vertices - covered);

  if (options.improve_steps_per_vertex > 0) {
    improve_matching(g.edges, vertices, out.edges, options.improve_steps_per_vertex * vertices, rng);
    std::sort(out.edges.begin(), out.edges.end());
    covered = out.edges.size() * g.t;
    out.uncovered_trace.push_back(vertices - covered);
  }
  out.uncovered = vertices - covered;
  return out;
}

ApproxResult almost_perfect_factor(const PartiteHypergraph& h, const ApproxConfig& cfg) {
  if (!h.balanced()) throw std::invalid_argument("almost_perfect_factor: instance is not balanced");
  ApproxResult result;
  result.params = resolve_params(cfg, h.n());
  auto sample = sample_copies(h, cfg);
  auto& copies = sample.copies;

  // Per-copy LPs; an infeasible copy is redrawn from its own stream.
  std::vector<FractionalAssignment> solutions(copies.size());
  std::vector<std::size_t> redraws(copies.size(), 0);
  std::vector<std::size_t> undershoots(copies.size(), 0);
  parallel_for(copies.size(), [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, "copy-redraw", i));
    for (std::size_t attempt = 0;; ++attempt) {
      const auto sub = h.induced(copies[i]);
      LpOptions lp_options;
      lp_options.clique_cap = cfg.clique_cap;
      auto lp = solve_fractional(sub.graph, lp_options);
      if (lp.feasible()) {
        for (auto& c : lp.assignment.cliques) {
          for (auto& v : c) v = sub.to_host[v];
        }
        solutions[i] = std::move(lp.assignment);
        return;
      }
      if (attempt >= cfg.max_retries) {
        throw RetriesExhausted("copy " + std::to_string(i) + " has no perfect fractional matching after " +
                               std::to_string(cfg.max_retries) + " redraws");
      }
      ++redraws[i];
      copies[i] = draw_copy(h, result.params, rng, undershoots[i]);
    }
  });

  result.copy_stats = copy_family_stats(h, copies, cfg);
  result.copy_stats.redraws = sample.stats.redraws;
  for (std::size_t i = 0; i < copies.size(); ++i) result.copy_stats.redraws += redraws[i] + undershoots[i];

  auto sparse = build_sparse_tgraph(h, copies, solutions, derive_seed(cfg.seed, "sparse"));
  result.sparse_edges = sparse.graph.edges.size();
  result.multi_copy_cliques = sparse.multi_copy_cliques;
  result.regularity = regularity_stats(sparse.graph);

  NibbleOptions nibble_options{cfg.theta, cfg.improve_steps_per_vertex};
  auto nibble = nibble_matching(sparse.graph, derive_seed(cfg.seed, "nibble"), nibble_options);
  result.nibble_uncovered = nibble.uncovered;
  for (std::size_t e : nibble.edges) result.matching.cliques.push_back(sparse.graph.edges[e]);

  if (cfg.host_refinement && cfg.improve_steps_per_vertex > 0 && nibble.uncovered > 0) {
    auto host = enumerate_cliques(h, cfg.clique_cap);
    if (host.truncated) {
      result.violations.push_back("host refinement skipped: clique cap reached");
    } else {
      std::vector<std::size_t> chosen;
      for (const auto& c : result.matching.cliques) {
        chosen.push_back(static_cast<std::size_t>(
            std::lower_bound(host.cliques.begin(), host.cliques.end(), c) - host.cliques.begin()));
      }
      Rng rng(derive_seed(cfg.seed, "host-refinement"));
      improve_matching(host.cliques, h.vertex_count(), chosen, cfg.improve_steps_per_vertex * h.vertex_count(), rng);
      result.matching.cliques.clear();
      for (std::size_t c : chosen) result.matching.cliques.push_back(host.cliques[c]);
    }
  }
  std::sort(result.matching.cliques.begin(), result.matching.cliques.end());

  const auto check = verify_matching(h, result.matching);
  if (!check.valid) throw std::logic_error("almost_perfect_factor: invalid matching (" + check.problems.front() + ")");
  result.uncovered = check.uncovered;
  result.uncovered_per_class.assign(h.t(), h.n() - result.matching.cliques.size());
  result.within_epsilon = static_cast<double>(result.uncovered_per_class.front()) <= cfg.epsilon * h.n();

  if (result.multi_copy_cliques > 0) {
    result.violations.push_back(std::to_string(result.multi_copy_cliques) +
                                " support cliques lie in more than one copy");
  }
  if (result.copy_stats.flagged_count > 0) {
    result.violations.push_back(std::to_string(result.copy_stats.flagged_count) + " copies below the codegree check");
  }
  if (!result.within_epsilon) result.violations.push_back("uncovered fraction exceeds epsilon");
  return result;
}

}  // namespace cliquefactor

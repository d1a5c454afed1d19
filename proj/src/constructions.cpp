#include "cliquefactor/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "cliquefactor/errors.hpp"

namespace cliquefactor {

namespace {

void check_params(std::uint32_t t, std::uint32_t k, std::uint32_t n) {
  if (k < 2 || k > t) throw std::invalid_argument("need 2 <= k <= t");
  if (t > 16) throw std::invalid_argument("need t <= 16");
  if (n < 1) throw std::invalid_argument("need n >= 1");
}

std::uint64_t legal_set_count(std::uint32_t t, std::uint32_t k, std::uint32_t n) {
  const double estimate = static_cast<double>(binomial(t, k)) * std::pow(static_cast<double>(n), k);
  if (estimate > 1e18) return UINT64_MAX;
  std::uint64_t count = binomial(t, k);
  for (std::uint32_t i = 0; i < k; ++i) count *= n;
  return count;
}

// Visits every legal k-set of a balanced instance in lexicographic order.
template <typename Fn>
void for_each_legal_set(std::uint32_t t, std::uint32_t k, std::uint32_t n, Fn&& fn) {
  std::vector<Vertex> set(k);
  std::vector<std::uint32_t> idx(k);
  for (const auto& combo : combinations(t, k)) {
    std::fill(idx.begin(), idx.end(), 0U);
    while (true) {
      for (std::uint32_t i = 0; i < k; ++i) set[i] = combo[i] * n + idx[i];
      fn(std::span<const Vertex>(set));
      std::int64_t p = static_cast<std::int64_t>(k) - 1;
      while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == n) idx[static_cast<std::size_t>(p--)] = 0;
      if (p < 0) break;
    }
  }
}

std::vector<std::uint32_t> balanced_sizes(std::uint32_t t, std::uint32_t n) { return std::vector<std::uint32_t>(t, n); }

}  // namespace

void GeneratorSpec::check() const {
  check_params(t, k, n);
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
  if (mode == Mode::MinCodegreeTarget && target > n) throw std::invalid_argument("codegree target exceeds n");
  if (margin < 0.0) throw std::invalid_argument("margin must be non-negative");
}

PartiteHypergraph complete_partite(std::uint32_t t, std::uint32_t k, std::uint32_t n, std::uint64_t edge_cap) {
  check_params(t, k, n);
  if (legal_set_count(t, k, n) > edge_cap) {
    throw CapExceeded("complete_partite: legal k-set count exceeds the cap of " + std::to_string(edge_cap));
  }
  std::vector<std::vector<Vertex>> edges;
  for_each_legal_set(t, k, n, [&](std::span<const Vertex> e) { edges.emplace_back(e.begin(), e.end()); });
  return PartiteHypergraph(t, k, balanced_sizes(t, n), std::move(edges));
}

std::uint32_t extremal_codegree(std::uint32_t t, std::uint32_t k, std::uint32_t n) {
  // ceil((t-k+1) n / t) - 1
  return ((t - k + 1) * n + t - 1) / t - 1;
}

PartiteHypergraph extremal_fractional(std::uint32_t t, std::uint32_t k, std::uint32_t n) {
  check_params(t, k, n);
  const std::uint32_t w = extremal_codegree(t, k, n);
  std::vector<std::vector<Vertex>> edges;
  for_each_legal_set(t, k, n, [&](std::span<const Vertex> e) {
    const bool meets_w = std::any_of(e.begin(), e.end(), [&](Vertex v) { return v % n < w; });
    if (meets_w) edges.emplace_back(e.begin(), e.end());
  });
  return PartiteHypergraph(t, k, balanced_sizes(t, n), std::move(edges));
}

PartiteHypergraph random_partite(std::uint32_t t, std::uint32_t k, std::uint32_t n, double p, Seed seed) {
  check_params(t, k, n);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
  if (legal_set_count(t, k, n) > kDefaultEdgeCap) throw CapExceeded("random_partite: instance too large");
  Rng rng(derive_seed(seed, "random-partite"));
  std::vector<std::vector<Vertex>> edges;
  for_each_legal_set(t, k, n, [&](std::span<const Vertex> e) {
    if (rng.bernoulli(p)) edges.emplace_back(e.begin(), e.end());
  });
  return PartiteHypergraph(t, k, balanced_sizes(t, n), std::move(edges));
}

RepairedInstance random_with_min_codegree(std::uint32_t t, std::uint32_t k, std::uint32_t n, std::uint32_t target,
                                          Seed seed, double margin, std::size_t max_sweeps) {
  check_params(t, k, n);
  if (target > n) throw std::invalid_argument("codegree target exceeds n");
  const double p = std::min(1.0, static_cast<double>(target) / n + margin);
  PartiteHypergraph base = random_partite(t, k, n, p, seed);
  if (target == 0) return {std::move(base), 0, 0};

  // Mutable copy of the (k-1)-level links, keyed by the (k-1)-set.
  std::map<std::vector<Vertex>, std::vector<Bitset>> links;
  std::vector<std::vector<Vertex>> edges;
  for (std::size_t e = 0; e < base.edge_count(); ++e) {
    auto ev = base.edge(e);
    edges.emplace_back(ev.begin(), ev.end());
  }
  auto outside_classes = [&](std::span<const Vertex> set) {
    ClassSet out;
    for (ClassIndex c = 0; c < t; ++c) {
      if (std::none_of(set.begin(), set.end(), [&](Vertex v) { return v / n == c; })) out.push_back(c);
    }
    return out;
  };
  {
    // Seed the table from the sampled instance, enumerating (k-1)-sets in
    // lexicographic order so the repair order is canonical.
    std::vector<Vertex> set(k - 1);
    for (const auto& combo : combinations(t, k - 1)) {
      std::vector<std::uint32_t> idx(k - 1, 0);
      while (true) {
        for (std::uint32_t i = 0; i + 1 < k; ++i) set[i] = combo[i] * n + idx[i];
        std::vector<Bitset> per_class;
        for (ClassIndex c : outside_classes(set)) per_class.push_back(base.link(set, c));
        links.emplace(set, std::move(per_class));
        std::int64_t pos = static_cast<std::int64_t>(k) - 2;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == n) idx[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
      }
    }
  }

  auto add_edge = [&](std::vector<Vertex> e) {
    std::sort(e.begin(), e.end());
    std::vector<Vertex> rest(k - 1);
    for (std::uint32_t drop = 0; drop < k; ++drop) {
      std::size_t r = 0;
      for (std::uint32_t i = 0; i < k; ++i) {
        if (i != drop) rest[r++] = e[i];
      }
      const ClassIndex c = e[drop] / n;
      const auto outside = outside_classes(rest);
      const auto slot = static_cast<std::size_t>(std::find(outside.begin(), outside.end(), c) - outside.begin());
      links.at(rest)[slot].set(e[drop] % n);
    }
    edges.push_back(std::move(e));
  };

  std::size_t repairs = 0;
  std::size_t sweeps = 0;
  while (true) {
    if (sweeps == max_sweeps) throw RetriesExhausted("random_with_min_codegree: repair did not converge");
    ++sweeps;
    bool changed = false;
    for (auto& [set, per_class] : links) {
      const auto outside = outside_classes(set);
      for (std::size_t s = 0; s < outside.size(); ++s) {
        std::size_t have = per_class[s].count();
        for (std::uint32_t u = 0; have < target && u < n; ++u) {
          if (per_class[s].test(u)) continue;
          std::vector<Vertex> e(set.begin(), set.end());
          e.push_back(outside[s] * n + u);
          add_edge(std::move(e));
          ++have;
          ++repairs;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return {PartiteHypergraph(t, k, balanced_sizes(t, n), std::move(edges)), repairs, sweeps};
}

PartiteHypergraph generate(const GeneratorSpec& spec) {
  spec.check();
  switch (spec.mode) {
    case GeneratorSpec::Mode::Complete:
      return complete_partite(spec.t, spec.k, spec.n);
    case GeneratorSpec::Mode::Extremal:
      return extremal_fractional(spec.t, spec.k, spec.n);
    case GeneratorSpec::Mode::UniformRandom:
      return random_partite(spec.t, spec.k, spec.n, spec.edge_prob, spec.seed);
    case GeneratorSpec::Mode::MinCodegreeTarget:
      break;
  }
  return random_with_min_codegree(spec.t, spec.k, spec.n, spec.target, spec.seed, spec.margin, spec.max_sweeps).graph;
}

TGraph near_regular_tgraph(std::uint32_t t, std::uint32_t class_size, std::uint32_t degree,
                           std::uint32_t max_pair_degree, Seed seed) {
  if (t < 2) throw std::invalid_argument("near_regular_tgraph: need t >= 2");
  Rng rng(derive_seed(seed, "near-regular"));
  TGraph g{t, std::vector<std::uint32_t>(t, class_size), {}};
  std::set<Clique> seen;
  std::unordered_map<std::uint64_t, std::uint32_t> pair_degree;
  auto pair_key = [](Vertex a, Vertex b) { return (std::uint64_t{a} << 32) | b; };
  std::vector<std::vector<Vertex>> perms(t, std::vector<Vertex>(class_size));
  for (std::uint32_t layer = 0; layer < degree; ++layer) {
    for (std::uint32_t c = 0; c < t; ++c) {
      for (std::uint32_t i = 0; i < class_size; ++i) perms[c][i] = i;
      if (c > 0) rng.shuffle(perms[c]);
    }
    for (std::uint32_t i = 0; i < class_size; ++i) {
      Clique e(t);
      for (std::uint32_t c = 0; c < t; ++c) e[c] = c * class_size + perms[c][i];
      if (seen.count(e)) continue;
      bool ok = true;
      for (std::uint32_t a = 0; a < t && ok; ++a) {
        for (std::uint32_t b = a + 1; b < t && ok; ++b) {
          auto it = pair_degree.find(pair_key(e[a], e[b]));
          if (it != pair_degree.end() && it->second >= max_pair_degree) ok = false;
        }
      }
      if (!ok) continue;
      for (std::uint32_t a = 0; a < t; ++a) {
        for (std::uint32_t b = a + 1; b < t; ++b) ++pair_degree[pair_key(e[a], e[b])];
      }
      seen.insert(e);
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

GeneralHypergraph complete_general(std::uint32_t n, std::uint32_t k) {
  auto sets = combinations(n, k);
  return GeneralHypergraph(n, k, std::vector<std::vector<Vertex>>(sets.begin(), sets.end()));
}

GeneralHypergraph random_general(std::uint32_t n, std::uint32_t k, double p, Seed seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
  Rng rng(derive_seed(seed, "random-general"));
  std::vector<std::vector<Vertex>> edges;
  for (auto& e : combinations(n, k)) {
    if (rng.bernoulli(p)) edges.push_back(std::move(e));
  }
  return GeneralHypergraph(n, k, std::move(edges));
}

GeneralHypergraph random_general_with_min_codegree(std::uint32_t n, std::uint32_t k, std::uint32_t target, Seed seed,
                                                   double margin) {
  if (k < 2 || k > n) throw std::invalid_argument("need 2 <= k <= n");
  if (target > n - k + 1) throw std::invalid_argument("codegree target exceeds n - k + 1");
  const double p = std::min(1.0, static_cast<double>(target) / (n - k + 1) + margin);
  GeneralHypergraph base = random_general(n, k, p, seed);
  std::map<std::vector<Vertex>, Bitset> links;
  for (const auto& set : combinations(n, k - 1)) links.emplace(set, Bitset(n));
  std::vector<std::vector<Vertex>> edges;
  std::vector<Vertex> rest(k - 1);
  auto record = [&](const std::vector<Vertex>& e) {
    for (std::uint32_t drop = 0; drop < k; ++drop) {
      std::size_t r = 0;
      for (std::uint32_t i = 0; i < k; ++i) {
        if (i != drop) rest[r++] = e[i];
      }
      links.at(rest).set(e[drop]);
    }
  };
  for (std::size_t e = 0; e < base.edge_count(); ++e) {
    auto ev = base.edge(e);
    edges.emplace_back(ev.begin(), ev.end());
    record(edges.back());
  }
  for (auto& [set, link] : links) {
    std::size_t have = link.count();
    for (Vertex u = 0; have < target && u < n; ++u) {
      if (link.test(u) || std::binary_search(set.begin(), set.end(), u)) continue;
      std::vector<Vertex> e(set.begin(), set.end());
      e.insert(std::upper_bound(e.begin(), e.end(), u), u);
      record(e);
      edges.push_back(std::move(e));
      ++have;
    }
  }
  return GeneralHypergraph(n, k, std::move(edges));
}

}  // namespace cliquefactor

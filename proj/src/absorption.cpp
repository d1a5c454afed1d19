#include "cliquefactor/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "cliquefactor/errors.hpp"
#include "cliquefactor/exact.hpp"

namespace cliquefactor {

namespace {

constexpr std::uint64_t kMatchingBudget = 1'000'000;

std::vector<Vertex> sorted_copy(std::span<const Vertex> s) {
  std::vector<Vertex> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

bool is_balanced_set(const PartiteHypergraph& h, std::span<const Vertex> set, std::size_t per_class) {
  std::vector<std::size_t> count(h.t(), 0);
  for (Vertex v : set) {
    if (v >= h.vertex_count()) return false;
    ++count[h.class_of(v)];
  }
  return std::all_of(count.begin(), count.end(), [&](std::size_t c) { return c == per_class; });
}

void require_shapes(const PartiteHypergraph& h, std::span<const Vertex> absorber, std::span<const Vertex> target,
                    bool target_optional) {
  const std::size_t t = h.t();
  if (absorber.size() != t * (t - 1) || !is_balanced_set(h, absorber, t - 1)) {
    throw std::invalid_argument("absorbing set must be a balanced set of size t(t-1)");
  }
  if (target_optional && target.empty()) return;
  if (target.size() != t || !is_balanced_set(h, target, 1)) {
    throw std::invalid_argument("target must be a balanced t-set");
  }
}

std::optional<Matching> perfect_matching_on(const PartiteHypergraph& h, const std::vector<Vertex>& universe) {
  Bitset mask(h.vertex_count());
  for (Vertex v : universe) mask.set(v);
  const auto cliques = enumerate_cliques(h, std::nullopt, &mask).cliques;
  auto search = find_exact_cover(universe, cliques, kMatchingBudget);
  if (search.status == SearchStatus::Budget) throw BudgetExhausted("absorbing matching search ran out of nodes");
  if (search.status == SearchStatus::None) return std::nullopt;
  return std::move(search.matching);
}

// Cliques of h indexed by vertex, for the step-by-step construction.
struct CliqueIndex {
  std::vector<Clique> cliques;
  std::vector<std::vector<std::uint32_t>> through;

  explicit CliqueIndex(const PartiteHypergraph& h) : cliques(enumerate_cliques(h).cliques), through(h.vertex_count()) {
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      for (Vertex v : cliques[c]) through[v].push_back(static_cast<std::uint32_t>(c));
    }
  }
};

class AbsorberBuilder {
 public:
  AbsorberBuilder(const PartiteHypergraph& h, const CliqueIndex& index, std::vector<Vertex> target)
      : h_(h), index_(index), target_(std::move(target)), used_(h.vertex_count(), false), u_(h.t()) {
    for (Vertex v : target_) used_[v] = true;
  }

  // Step j (0-based): the (t-1)-sets U that may be added.
  std::vector<std::vector<Vertex>> candidates(std::size_t j) const {
    std::vector<std::vector<Vertex>> out;
    const Vertex vj = target_[j];
    std::vector<Vertex> rest;
    std::vector<Vertex> probe;
    for (std::uint32_t c : index_.through[vj]) {
      rest.clear();
      bool free = true;
      for (Vertex x : index_.cliques[c]) {
        if (x == vj) continue;
        if (used_[x]) {
          free = false;
          break;
        }
        rest.push_back(x);
      }
      if (!free) continue;
      if (j > 0) {
        // U_j + u_j must be a clique too; u_j sits in class j like v_j.
        probe = rest;
        probe.insert(std::upper_bound(probe.begin(), probe.end(), u_[j]), u_[j]);
        if (!is_clique(h_, probe)) continue;
      }
      out.push_back(rest);
    }
    return out;
  }

  void push(std::size_t j, const std::vector<Vertex>& set) {
    if (j == 0) {
      for (Vertex x : set) u_[h_.class_of(x)] = x;
    }
    for (Vertex x : set) used_[x] = true;
    chosen_.push_back(set);
  }

  void pop() {
    for (Vertex x : chosen_.back()) used_[x] = false;
    chosen_.pop_back();
  }

  std::vector<Vertex> absorber() const {
    std::vector<Vertex> a;
    for (const auto& s : chosen_) a.insert(a.end(), s.begin(), s.end());
    std::sort(a.begin(), a.end());
    return a;
  }

 private:
  const PartiteHypergraph& h_;
  const CliqueIndex& index_;
  std::vector<Vertex> target_;
  std::vector<bool> used_;
  std::vector<Vertex> u_;  // u_[c]: the vertex of class c chosen at step 0
  std::vector<std::vector<Vertex>> chosen_;
};

void exhaust(AbsorberBuilder& b, std::size_t j, std::size_t t, std::size_t budget, AbsorbingSetSearch& out,
             std::set<std::vector<Vertex>>& found) {
  if (out.budget_exhausted) return;
  if (j == t) {
    found.insert(b.absorber());
    return;
  }
  for (const auto& c : b.candidates(j)) {
    if (out.attempts >= budget) {
      out.budget_exhausted = true;
      return;
    }
    ++out.attempts;
    b.push(j, c);
    exhaust(b, j + 1, t, budget, out, found);
    b.pop();
    if (out.budget_exhausted) return;
  }
}

std::vector<Vertex> random_balanced_set(const PartiteHypergraph& h, std::uint32_t per_class, Rng& rng) {
  std::vector<Vertex> set;
  for (ClassIndex c = 0; c < h.t(); ++c) {
    for (auto i : rng.sample_sorted(h.class_size(c), per_class)) set.push_back(h.vertex(c, i));
  }
  return set;
}

}  // namespace

double absorbing_selection_probability(std::uint32_t t, std::uint32_t n, double gamma) {
  const double m = static_cast<double>(t) * (t - 1);
  const double sets = std::pow(static_cast<double>(binomial(n, t - 1)), t);
  return std::min(1.0, std::pow(gamma, m) * n / (std::pow(t, 3) * std::pow(2.0, t + 3) * sets));
}

double absorbing_count_lower_bound(std::uint32_t t, std::uint32_t n, double gamma) {
  const double m = static_cast<double>(t) * (t - 1);
  return std::pow(gamma, m) * std::pow(static_cast<double>(binomial(n, t - 1)), t) / std::pow(2.0, t);
}

std::optional<Matching> absorbing_matching(const PartiteHypergraph& h, std::span<const Vertex> absorber,
                                           std::span<const Vertex> target) {
  require_shapes(h, absorber, target, true);
  auto universe = sorted_copy(absorber);
  universe.insert(universe.end(), target.begin(), target.end());
  std::sort(universe.begin(), universe.end());
  if (std::adjacent_find(universe.begin(), universe.end()) != universe.end()) return std::nullopt;
  return perfect_matching_on(h, universe);
}

bool is_absorbing(const PartiteHypergraph& h, std::span<const Vertex> absorber, std::span<const Vertex> target) {
  require_shapes(h, absorber, target, false);
  const auto a = sorted_copy(absorber);
  for (Vertex v : target) {
    if (std::binary_search(a.begin(), a.end(), v)) return false;
  }
  return absorbing_matching(h, absorber, {}).has_value() && absorbing_matching(h, absorber, target).has_value();
}

AbsorbingSetSearch find_absorbing_sets(const PartiteHypergraph& h, std::span<const Vertex> target, std::size_t budget,
                                       Seed seed, bool exhaustive) {
  if (target.size() != h.t() || !is_balanced_set(h, target, 1)) {
    throw std::invalid_argument("find_absorbing_sets: target must be a balanced t-set");
  }
  const CliqueIndex index(h);
  AbsorberBuilder builder(h, index, sorted_copy(target));
  AbsorbingSetSearch out;
  std::set<std::vector<Vertex>> found;
  if (exhaustive) {
    exhaust(builder, 0, h.t(), budget, out, found);
  } else {
    Rng rng(derive_seed(seed, "absorbing-sets"));
    for (; out.attempts < budget; ++out.attempts) {
      std::size_t j = 0;
      for (; j < h.t(); ++j) {
        const auto options = builder.candidates(j);
        if (options.empty()) break;
        builder.push(j, options[rng.below(options.size())]);
      }
      if (j == h.t()) found.insert(builder.absorber());
      for (std::size_t i = 0; i < j; ++i) builder.pop();
    }
  }
  out.sets.assign(found.begin(), found.end());
  return out;
}

AbsorbingFamily build_absorbing_family(const PartiteHypergraph& h, const AbsorptionConfig& cfg) {
  if (!h.balanced()) throw std::invalid_argument("build_absorbing_family: instance is not balanced");
  const std::uint32_t t = h.t();
  const std::uint32_t n = h.n();
  const std::size_t m = std::size_t{t} * (t - 1);
  if (cfg.leftover_capacity % t != 0) throw std::invalid_argument("leftover capacity must be a multiple of t");

  const double p = cfg.selection_prob.value_or(absorbing_selection_probability(t, n, cfg.gamma));
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("selection probability outside [0,1]");
  const double expected = p * std::pow(static_cast<double>(binomial(n, t - 1)), t);
  std::size_t target = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(expected)),
                                             2 * cfg.leftover_capacity / t);
  const std::size_t needed = cfg.leftover_capacity / t;
  if (cfg.family_size_budget) target = std::min(target, *cfg.family_size_budget / m);
  target = std::min<std::size_t>(target, n / (t - 1));
  if (target < needed) {
    throw std::invalid_argument("family size budget cannot hold " + std::to_string(needed) + " absorbing members");
  }

  AbsorbingFamily fam;
  fam.t = t;
  fam.leftover_capacity = cfg.leftover_capacity;
  fam.target_members = target;
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(cfg.max_retries, 1); ++attempt) {
    Rng rng(derive_seed(cfg.seed, "absorbing-family", attempt));
    fam.attempts = attempt + 1;
    fam.members.clear();
    fam.member_matchings.clear();
    fam.audit.clear();
    fam.sampled = fam.discarded_intersecting = fam.discarded_non_absorbing = 0;

    // Uniform balanced m-sets, kept when disjoint from those already kept and
    // perfectly matchable in H′.
    std::vector<bool> taken(h.vertex_count(), false);
    const std::size_t max_draws = 50 * target + 50;
    while (fam.members.size() < target && fam.sampled < max_draws) {
      auto a = random_balanced_set(h, t - 1, rng);
      ++fam.sampled;
      if (std::any_of(a.begin(), a.end(), [&](Vertex v) { return taken[v]; })) {
        ++fam.discarded_intersecting;
        continue;
      }
      auto matching = perfect_matching_on(h, a);
      if (!matching) {
        ++fam.discarded_non_absorbing;
        continue;
      }
      for (Vertex v : a) taken[v] = true;
      fam.members.push_back(std::move(a));
      fam.member_matchings.push_back(std::move(*matching));
    }
    if (fam.members.size() < needed) continue;

    // Coverage audit: each sampled T outside U must have an absorbing member.
    bool passed = true;
    if (cfg.leftover_capacity > 0) {
      std::vector<Vertex> outside_per_class;
      for (std::size_t s = 0; s < cfg.audit_size && passed; ++s) {
        std::vector<Vertex> tset;
        for (ClassIndex c = 0; c < t; ++c) {
          outside_per_class.clear();
          for (std::uint32_t i = 0; i < n; ++i) {
            if (!taken[h.vertex(c, i)]) outside_per_class.push_back(h.vertex(c, i));
          }
          if (outside_per_class.empty()) break;
          tset.push_back(outside_per_class[rng.below(outside_per_class.size())]);
        }
        if (tset.size() != t) break;
        std::size_t count = 0;
        for (const auto& a : fam.members) count += is_absorbing(h, a, tset);
        fam.audit.push_back({tset, count});
        if (count == 0) passed = false;
      }
    }
    if (!passed) continue;

    fam.vertices.clear();
    for (const auto& a : fam.members) fam.vertices.insert(fam.vertices.end(), a.begin(), a.end());
    std::sort(fam.vertices.begin(), fam.vertices.end());
    return fam;
  }
  throw RetriesExhausted("build_absorbing_family: no family passed after " + std::to_string(cfg.max_retries) +
                         " attempts");
}

Matching absorb_leftover(const PartiteHypergraph& h, const AbsorbingFamily& family, std::span<const Vertex> leftover) {
  const std::uint32_t t = h.t();
  if (leftover.size() % t != 0 || !is_balanced_set(h, leftover, leftover.size() / t)) {
    throw std::invalid_argument("absorb_leftover: leftover is not balanced");
  }
  if (leftover.size() > family.leftover_capacity) {
    throw std::invalid_argument("absorb_leftover: leftover exceeds the family's capacity");
  }
  for (Vertex v : leftover) {
    if (std::binary_search(family.vertices.begin(), family.vertices.end(), v)) {
      throw std::invalid_argument("absorb_leftover: leftover meets the absorbing family");
    }
  }

  // Zip each class's leftover in id order into balanced t-sets.
  const std::size_t sets = leftover.size() / t;
  std::vector<std::vector<Vertex>> per_class(t);
  for (Vertex v : sorted_copy(leftover)) per_class[h.class_of(v)].push_back(v);
  std::vector<std::vector<Vertex>> targets(sets);
  for (std::size_t i = 0; i < sets; ++i) {
    for (ClassIndex c = 0; c < t; ++c) targets[i].push_back(per_class[c][i]);
  }

  const std::size_t members = family.members.size();
  std::map<std::pair<std::size_t, std::size_t>, bool> cache;
  auto absorbs = [&](std::size_t target, std::size_t member) {
    auto [it, fresh] = cache.try_emplace({target, member}, false);
    if (fresh) it->second = is_absorbing(h, family.members[member], targets[target]);
    return it->second;
  };

  // First fit, then augmenting paths over the absorbs relation.
  std::vector<std::size_t> owner(members, sets);
  std::vector<std::size_t> assigned(sets, members);
  std::vector<bool> seen;
  auto augment = [&](auto&& self, std::size_t target) -> bool {
    for (std::size_t a = 0; a < members; ++a) {
      if (seen[a] || !absorbs(target, a)) continue;
      seen[a] = true;
      if (owner[a] == sets || self(self, owner[a])) {
        owner[a] = target;
        assigned[target] = a;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < sets; ++i) {
    for (std::size_t a = 0; a < members && assigned[i] == members; ++a) {
      if (owner[a] == sets && absorbs(i, a)) {
        owner[a] = i;
        assigned[i] = a;
      }
    }
    if (assigned[i] != members) continue;
    seen.assign(members, false);
    if (!augment(augment, i)) {
      std::string desc;
      for (Vertex v : targets[i]) desc += (desc.empty() ? "" : ",") + std::to_string(v);
      throw AbsorptionFailure("no unused absorbing member for {" + desc + "}");
    }
  }

  Matching out;
  for (std::size_t a = 0; a < members; ++a) {
    if (owner[a] == sets) {
      const auto& own = family.member_matchings[a].cliques;
      out.cliques.insert(out.cliques.end(), own.begin(), own.end());
      continue;
    }
    auto m = absorbing_matching(h, family.members[a], targets[owner[a]]);
    if (!m) throw std::logic_error("absorb_leftover: absorbing member lost its matching");
    out.cliques.insert(out.cliques.end(), m->cliques.begin(), m->cliques.end());
  }
  std::sort(out.cliques.begin(), out.cliques.end());
  return out;
}

}  // namespace cliquefactor

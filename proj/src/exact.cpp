#include "cliquefactor/exact.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "cliquefactor/errors.hpp"

namespace cliquefactor {

namespace {

// Knuth's dancing links. Node 0 is the root; nodes 1..items are headers.
class Dlx {
 public:
  Dlx(std::size_t items, std::span<const std::vector<std::uint32_t>> rows) : items_(items) {
    const std::size_t headers = items + 1;
    left_.resize(headers);
    right_.resize(headers);
    up_.resize(headers);
    down_.resize(headers);
    column_.resize(headers);
    row_.resize(headers, 0);
    size_.assign(headers, 0);
    for (std::size_t i = 0; i < headers; ++i) {
      left_[i] = (i + headers - 1) % headers;
      right_[i] = (i + 1) % headers;
      up_[i] = down_[i] = i;
      column_[i] = i;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::size_t first = 0;
      for (std::uint32_t item : rows[r]) {
        const std::size_t col = item + 1;
        const std::size_t node = column_.size();
        column_.push_back(col);
        row_.push_back(r);
        up_.push_back(up_[col]);
        down_.push_back(col);
        down_[up_[col]] = node;
        up_[col] = node;
        ++size_[col];
        if (first == 0) {
          first = node;
          left_.push_back(node);
          right_.push_back(node);
        } else {
          left_.push_back(left_[first]);
          right_.push_back(first);
          right_[left_[first]] = node;
          left_[first] = node;
        }
      }
    }
  }

  // Calls on_solution(rows) per exact cover; it returns true to stop.
  // Returns false when the node budget ran out.
  template <typename Fn>
  bool search(std::uint64_t budget, std::uint64_t& nodes, Fn&& on_solution) {
    budget_ = budget;
    stopped_ = false;
    exhausted_ = false;
    chosen_.clear();
    recurse(nodes, on_solution);
    return !exhausted_;
  }

 private:
  template <typename Fn>
  void recurse(std::uint64_t& nodes, Fn& on_solution) {
    if (right_[0] == 0) {
      if (on_solution(chosen_)) stopped_ = true;
      return;
    }
    std::size_t best = right_[0];
    for (std::size_t c = right_[0]; c != 0; c = right_[c]) {
      if (size_[c] < size_[best]) best = c;
    }
    if (size_[best] == 0) return;
    cover(best);
    for (std::size_t r = down_[best]; r != best && !stopped_; r = down_[r]) {
      if (nodes >= budget_) {
        exhausted_ = stopped_ = true;
        break;
      }
      ++nodes;
      chosen_.push_back(row_[r]);
      for (std::size_t j = right_[r]; j != r; j = right_[j]) cover(column_[j]);
      recurse(nodes, on_solution);
      for (std::size_t j = left_[r]; j != r; j = left_[j]) uncover(column_[j]);
      chosen_.pop_back();
    }
    uncover(best);
  }

  void cover(std::size_t c) {
    right_[left_[c]] = right_[c];
    left_[right_[c]] = left_[c];
    for (std::size_t i = down_[c]; i != c; i = down_[i]) {
      for (std::size_t j = right_[i]; j != i; j = right_[j]) {
        down_[up_[j]] = down_[j];
        up_[down_[j]] = up_[j];
        --size_[column_[j]];
      }
    }
  }

  void uncover(std::size_t c) {
    for (std::size_t i = up_[c]; i != c; i = up_[i]) {
      for (std::size_t j = left_[i]; j != i; j = left_[j]) {
        ++size_[column_[j]];
        down_[up_[j]] = j;
        up_[down_[j]] = j;
      }
    }
    right_[left_[c]] = c;
    left_[right_[c]] = c;
  }

  std::size_t items_;
  std::vector<std::size_t> left_, right_, up_, down_, column_, row_, size_;
  std::vector<std::size_t> chosen_;
  std::uint64_t budget_ = 0;
  bool stopped_ = false;
  bool exhausted_ = false;
};

struct CoverProblem {
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::size_t> source;  // row -> option index
};

CoverProblem to_items(std::span<const Vertex> universe, std::span<const Clique> options) {
  CoverProblem p;
  for (std::size_t o = 0; o < options.size(); ++o) {
    std::vector<std::uint32_t> row;
    bool inside = true;
    for (Vertex v : options[o]) {
      auto it = std::lower_bound(universe.begin(), universe.end(), v);
      if (it == universe.end() || *it != v) {
        inside = false;
        break;
      }
      row.push_back(static_cast<std::uint32_t>(it - universe.begin()));
    }
    if (inside && !row.empty()) {
      p.rows.push_back(std::move(row));
      p.source.push_back(o);
    }
  }
  return p;
}

std::vector<Clique> all_cliques(const PartiteHypergraph& h, std::size_t cap, const char* who) {
  auto list = enumerate_cliques(h, cap);
  if (list.truncated) throw CapExceeded(std::string(who) + ": more than " + std::to_string(cap) + " cliques");
  return std::move(list.cliques);
}

std::vector<Vertex> all_vertices(const PartiteHypergraph& h) {
  std::vector<Vertex> u(h.vertex_count());
  for (Vertex v = 0; v < h.vertex_count(); ++v) u[v] = v;
  return u;
}

}  // namespace

FactorSearch find_exact_cover(std::span<const Vertex> universe, std::span<const Clique> options,
                              std::uint64_t node_budget) {
  FactorSearch result;
  if (universe.empty()) {
    result.status = SearchStatus::Found;
    return result;
  }
  const auto problem = to_items(universe, options);
  Dlx dlx(universe.size(), problem.rows);
  bool found = false;
  const bool complete = dlx.search(node_budget, result.nodes, [&](const std::vector<std::size_t>& rows) {
    for (std::size_t r : rows) result.matching.cliques.push_back(options[problem.source[r]]);
    std::sort(result.matching.cliques.begin(), result.matching.cliques.end());
    found = true;
    return true;
  });
  result.status = found ? SearchStatus::Found : complete ? SearchStatus::None : SearchStatus::Budget;
  return result;
}

FactorSearch find_perfect_factor(const PartiteHypergraph& h, const ExactOptions& options) {
  if (!h.balanced()) throw std::invalid_argument("find_perfect_factor: instance is not balanced");
  const auto cliques = all_cliques(h, options.clique_cap, "find_perfect_factor");
  const auto universe = all_vertices(h);
  auto result = find_exact_cover(universe, cliques, options.node_budget);
  if (result.status == SearchStatus::Budget) {
    throw BudgetExhausted("find_perfect_factor: node budget of " + std::to_string(options.node_budget) +
                          " exhausted");
  }
  return result;
}

FactorCount count_perfect_factors(const PartiteHypergraph& h, std::uint64_t cap, const ExactOptions& options) {
  if (!h.balanced()) throw std::invalid_argument("count_perfect_factors: instance is not balanced");
  FactorCount result;
  if (cap == 0) {
    result.capped = true;
    return result;
  }
  const auto cliques = all_cliques(h, options.clique_cap, "count_perfect_factors");
  const auto universe = all_vertices(h);
  const auto problem = to_items(universe, cliques);
  Dlx dlx(universe.size(), problem.rows);
  // Each factor is found exactly once: the branching column is forced, so two
  // different branch paths always differ in the clique covering that column.
  const bool complete = dlx.search(options.node_budget, result.nodes, [&](const std::vector<std::size_t>&) {
    ++result.count;
    if (result.count >= cap) {
      result.capped = true;
      return true;
    }
    return false;
  });
  result.budget_exhausted = !complete;
  return result;
}

namespace {

class MaxMatching {
 public:
  MaxMatching(const PartiteHypergraph& h, std::vector<Clique> cliques, std::uint64_t budget)
      : h_(h), cliques_(std::move(cliques)), budget_(budget),
        ceiling_(*std::min_element(h.class_sizes().begin(), h.class_sizes().end())), free_(h.vertex_count(), true),
        through_(h.vertex_count()) {
    for (std::size_t c = 0; c < cliques_.size(); ++c) {
      for (Vertex v : cliques_[c]) through_[v].push_back(c);
    }
  }

  void run() {
    greedy();
    complete_ = true;
    recurse();
  }

  const std::vector<std::size_t>& best() const { return best_; }
  bool complete() const { return complete_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool available(std::size_t c) const {
    for (Vertex v : cliques_[c]) {
      if (!free_[v]) return false;
    }
    return true;
  }

  std::size_t live_degree(Vertex v) const {
    std::size_t d = 0;
    for (std::size_t c : through_[v]) d += available(c);
    return d;
  }

  void greedy() {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < cliques_.size(); ++c) {
      if (!available(c)) continue;
      chosen.push_back(c);
      for (Vertex v : cliques_[c]) free_[v] = false;
    }
    for (std::size_t c : chosen) {
      for (Vertex v : cliques_[c]) free_[v] = true;
    }
    best_ = chosen;
  }

  void recurse() {
    if (!complete_) return;
    // Per class, the free vertices that still lie in an available clique; each
    // further clique uses one of them from every class.
    std::vector<std::size_t> coverable(h_.t(), 0);
    Vertex branch = h_.vertex_count();
    std::size_t branch_degree = std::numeric_limits<std::size_t>::max();
    for (Vertex v = 0; v < h_.vertex_count(); ++v) {
      if (!free_[v]) continue;
      const std::size_t d = live_degree(v);
      if (d == 0) continue;
      ++coverable[h_.class_of(v)];
      if (d < branch_degree) {
        branch_degree = d;
        branch = v;
      }
    }
    const std::size_t bound = *std::min_element(coverable.begin(), coverable.end());
    if (current_.size() > best_.size()) best_ = current_;
    if (bound == 0 || current_.size() + bound <= best_.size()) return;
    if (best_.size() == ceiling_) return;

    for (std::size_t c : through_[branch]) {
      if (!available(c)) continue;
      if (nodes_ >= budget_) {
        complete_ = false;
        return;
      }
      ++nodes_;
      for (Vertex v : cliques_[c]) free_[v] = false;
      current_.push_back(c);
      recurse();
      current_.pop_back();
      for (Vertex v : cliques_[c]) free_[v] = true;
      if (!complete_ || best_.size() == ceiling_) return;
    }
    // Leave `branch` uncovered.
    if (nodes_ >= budget_) {
      complete_ = false;
      return;
    }
    ++nodes_;
    free_[branch] = false;
    recurse();
    free_[branch] = true;
  }

  const PartiteHypergraph& h_;
  std::vector<Clique> cliques_;
  std::uint64_t budget_;
  std::size_t ceiling_;  // no matching has more cliques
  std::vector<bool> free_;
  std::vector<std::vector<std::size_t>> through_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  std::uint64_t nodes_ = 0;
  bool complete_ = true;
};

}  // namespace

AlmostFactor find_almost_factor(const PartiteHypergraph& h, std::size_t max_uncovered, const ExactOptions& options) {
  auto cliques = all_cliques(h, options.clique_cap, "find_almost_factor");
  MaxMatching search(h, cliques, options.node_budget);
  search.run();

  AlmostFactor result;
  for (std::size_t c : search.best()) result.matching.cliques.push_back(cliques[c]);
  std::sort(result.matching.cliques.begin(), result.matching.cliques.end());
  result.uncovered = h.vertex_count() - result.matching.covered();
  result.optimal = search.complete();
  result.meets_target = result.uncovered <= max_uncovered;
  result.nodes = search.nodes();
  return result;
}

}  // namespace cliquefactor

#include "cliquefactor/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "cliquefactor/constructions.hpp"
#include "cliquefactor/errors.hpp"
#include "cliquefactor/exact.hpp"

namespace cliquefactor {

PipelineConfig PipelineConfig::desk(std::uint32_t t, std::uint32_t n) {
  PipelineConfig cfg;
  cfg.desk_scale = true;
  cfg.leftover_capacity = default_leftover_capacity(t, n, cfg.gamma);
  return cfg;
}

std::size_t default_leftover_capacity(std::uint32_t t, std::uint32_t n, double gamma) {
  const double eps = std::pow(gamma, 2.0 * t * (t - 1)) / (std::pow(t, 2) * std::pow(2.0, 2 * t + 5));
  const auto sets = static_cast<std::size_t>(std::floor(eps * n));
  if (sets >= 1) return sets * t;
  return std::size_t{t} * static_cast<std::size_t>(std::ceil(0.02 * n));
}

PipelineResult perfect_factor(const PartiteHypergraph& h, const PipelineConfig& cfg) {
  if (!h.balanced()) throw std::invalid_argument("perfect_factor: instance is not balanced");
  const std::uint32_t t = h.t();
  const std::uint32_t n = h.n();
  const std::size_t capacity = cfg.leftover_capacity.value_or(default_leftover_capacity(t, n, cfg.gamma));
  if (capacity % t != 0) throw std::invalid_argument("perfect_factor: leftover capacity must be a multiple of t");

  PipelineResult result;
  for (std::size_t r = 0; r < std::max<std::size_t>(cfg.max_outer_retries, 1); ++r) {
    result.attempts = r + 1;
    const std::string tag = "attempt " + std::to_string(r) + ": ";

    AbsorptionConfig acfg = cfg.absorption;
    acfg.gamma = cfg.gamma;
    acfg.leftover_capacity = capacity;
    acfg.seed = derive_seed(cfg.seed, "pipeline-absorption", r);
    std::optional<AbsorbingFamily> family;
    try {
      family = build_absorbing_family(h, acfg);
    } catch (const RetriesExhausted& e) {
      result.diagnostics.push_back(tag + "absorbing family: " + e.what());
      continue;
    }

    std::vector<Vertex> rest;
    for (Vertex v = 0; v < h.vertex_count(); ++v) {
      if (!std::binary_search(family->vertices.begin(), family->vertices.end(), v)) rest.push_back(v);
    }
    Matching combined;
    std::vector<Vertex> leftover;
    if (!rest.empty()) {
      const auto sub = h.induced(rest);
      const std::uint32_t sub_n = sub.graph.n();
      ApproxConfig xcfg = cfg.approx;
      if (cfg.desk_scale) {
        const auto preset = ApproxConfig::desk(t, sub_n);
        if (!xcfg.trimmed_size) xcfg.trimmed_size = preset.trimmed_size;
        if (!xcfg.copy_prob) xcfg.copy_prob = preset.copy_prob;
        if (!xcfg.copy_count) xcfg.copy_count = preset.copy_count;
      }
      xcfg.gamma = cfg.gamma;
      xcfg.epsilon = std::clamp(static_cast<double>(capacity) / (static_cast<double>(t) * sub_n), 1e-9, 0.999);
      xcfg.seed = derive_seed(cfg.seed, "pipeline-approx", r);
      ApproxResult near;
      try {
        near = almost_perfect_factor(sub.graph, xcfg);
      } catch (const RetriesExhausted& e) {
        result.diagnostics.push_back(tag + "near-perfect matching: " + e.what());
        continue;
      }
      std::vector<bool> covered(sub.graph.vertex_count(), false);
      for (const auto& c : near.matching.cliques) {
        Clique host;
        for (Vertex v : c) {
          covered[v] = true;
          host.push_back(sub.to_host[v]);
        }
        combined.cliques.push_back(std::move(host));
      }
      for (Vertex v = 0; v < sub.graph.vertex_count(); ++v) {
        if (!covered[v]) leftover.push_back(sub.to_host[v]);
      }
    }
    if (leftover.size() > capacity) {
      result.diagnostics.push_back(tag + "leftover of " + std::to_string(leftover.size()) +
                                   " vertices exceeds capacity " + std::to_string(capacity));
      continue;
    }

    Matching absorbed;
    try {
      absorbed = absorb_leftover(h, *family, leftover);
    } catch (const AbsorptionFailure& e) {
      result.diagnostics.push_back(tag + "absorption: " + e.what());
      continue;
    }
    combined.cliques.insert(combined.cliques.end(), absorbed.cliques.begin(), absorbed.cliques.end());
    std::sort(combined.cliques.begin(), combined.cliques.end());

    const auto check = verify_matching(h, combined);
    if (!check.valid || !check.perfect) {
      result.diagnostics.push_back(tag + "assembled matching failed verification" +
                                   (check.problems.empty() ? std::string() : " (" + check.problems.front() + ")"));
      continue;
    }
    result.success = true;
    result.matching = std::move(combined);
    result.absorber_vertices = family->vertices.size();
    result.leftover = leftover.size();
    return result;
  }
  return result;
}

std::vector<ScanRow> threshold_scan(const ScanConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  std::vector<ScanRow> rows;
  for (std::uint32_t n : cfg.n_values) {
    std::set<std::uint32_t> deltas;
    for (auto d : cfg.deltas) {
      if (d <= n) deltas.insert(d);
    }
    for (double f : cfg.delta_fractions) deltas.insert(std::min(n, static_cast<std::uint32_t>(std::ceil(f * n))));
    const std::uint32_t extremal_delta = extremal_codegree(cfg.t, cfg.k, n);

    for (std::uint32_t delta : deltas) {
      ScanRow row{cfg.t, cfg.k, n, delta, 0, std::nullopt, std::nullopt, 0};
      const bool run_exact = cfg.t * n <= cfg.exact_max_vertices;
      const bool run_pipeline = n >= cfg.pipeline_min_n;
      std::size_t exact_ok = 0;
      std::size_t exact_runs = 0;
      std::size_t pipeline_ok = 0;
      double elapsed_ms = 0;

      std::vector<PartiteHypergraph> instances;
      const std::size_t cell = rows.size();
      for (std::size_t s = 0; s < cfg.samples; ++s) {
        const Seed seed = derive_seed(cfg.seed, "scan-instance", cell * 1'000'003 + s);
        instances.push_back(random_with_min_codegree(cfg.t, cfg.k, n, delta, seed).graph);
      }
      if (cfg.include_extremal && delta == extremal_delta && extremal_delta >= 1) {
        instances.push_back(extremal_fractional(cfg.t, cfg.k, n));
      }

      for (std::size_t s = 0; s < instances.size(); ++s) {
        const auto& h = instances[s];
        const auto start = Clock::now();
        if (run_exact) {
          try {
            exact_ok += find_perfect_factor(h).status == SearchStatus::Found;
            ++exact_runs;
          } catch (const BudgetExhausted&) {
          }
        }
        if (run_pipeline) {
          auto pcfg = PipelineConfig::desk(cfg.t, n);
          pcfg.seed = derive_seed(cfg.seed, "scan-pipeline", cell * 1'000'003 + s);
          pipeline_ok += perfect_factor(h, pcfg).success;
        }
        elapsed_ms += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      }
      row.samples = instances.size();
      if (run_exact && exact_runs > 0) row.exact_success = static_cast<double>(exact_ok) / exact_runs;
      if (run_pipeline && !instances.empty()) row.pipeline_success = static_cast<double>(pipeline_ok) / instances.size();
      row.mean_runtime_ms = instances.empty() ? 0 : elapsed_ms / instances.size();
      rows.push_back(row);
    }
  }
  return rows;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows, bool timing) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::string(buf);
  };
  std::string out = "t,k,n,deltaTilde,samples,exactSuccess,pipelineSuccess,meanRuntimeMs\n";
  for (const auto& r : rows) {
    out += std::to_string(r.t) + "," + std::to_string(r.k) + "," + std::to_string(r.n) + "," +
           std::to_string(r.delta) + "," + std::to_string(r.samples) + ",";
    out += (r.exact_success ? num(*r.exact_success) : "") + ",";
    out += (r.pipeline_success ? num(*r.pipeline_success) : "") + ",";
    out += (timing ? num(r.mean_runtime_ms) : "") + "\n";
  }
  return out;
}

}  // namespace cliquefactor

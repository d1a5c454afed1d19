#include "cliquefactor/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliquefactor/absorption.hpp"
#include "cliquefactor/approx.hpp"
#include "cliquefactor/constructions.hpp"
#include "cliquefactor/errors.hpp"
#include "cliquefactor/exact.hpp"
#include "cliquefactor/fractional.hpp"
#include "cliquefactor/io.hpp"
#include "cliquefactor/kernels.hpp"
#include "cliquefactor/partition.hpp"
#include "cliquefactor/pipeline.hpp"

namespace cliquefactor::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config values come from the --config file and from per-subcommand flags
// (flags win). Every value read is echoed so the run record shows the
// effective configuration; unknown keys are rejected.
class Settings {
 public:
  explicit Settings(json given) : given_(std::move(given)) {
    if (!given_.is_object()) throw UsageError("config must be a JSON object");
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    T value = fallback;
    if (given_.contains(key) && !given_[key].is_null()) value = convert<T>(key);
    echo_[key] = value;
    return value;
  }

  template <typename T>
  std::optional<T> maybe(const std::string& key) {
    used_.insert(key);
    if (!given_.contains(key) || given_[key].is_null()) {
      echo_[key] = nullptr;
      return std::nullopt;
    }
    T value = convert<T>(key);
    echo_[key] = value;
    return value;
  }

  void finish() const {
    for (const auto& [key, value] : given_.items()) {
      if (!used_.count(key)) throw UsageError("unknown config key '" + key + "'");
    }
  }

  const json& echo() const { return echo_; }

 private:
  template <typename T>
  T convert(const std::string& key) const {
    try {
      return given_.at(key).get<T>();
    } catch (const json::exception&) {
      throw UsageError("config key '" + key + "' has the wrong type");
    }
  }

  json given_;
  json echo_ = json::object();
  std::set<std::string> used_;
};

struct Outcome {
  json result = json::object();
  std::string verdict;
  int exit_code = 0;
  std::optional<json> instance;
  std::optional<std::string> csv;
  std::optional<std::string> edge_list;
};

struct Common {
  Seed seed = 0;
  std::string config_path;
  std::string out_dir;
  bool timing = false;
};

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json vertex_list(const PartiteHypergraph& h, std::span<const Vertex> vs) {
  json out = json::array();
  for (Vertex v : vs) out.push_back(io::format_vertex(h.id(v)));
  return out;
}

json matching_json(const PartiteHypergraph& h, const Matching& m) {
  json out = json::array();
  for (const auto& c : m.cliques) out.push_back(vertex_list(h, c));
  return out;
}

json weights_json(const PartiteHypergraph& h, const FarkasCertificate& c) {
  json out = json::object();
  for (Vertex v = 0; v < h.vertex_count(); ++v) out[io::format_vertex(h.id(v))] = to_string(c.weights[v]);
  return out;
}

std::vector<Vertex> parse_vertex_list(const PartiteHypergraph& h, const std::vector<std::string>& ids) {
  std::vector<Vertex> out;
  for (const auto& s : ids) {
    VertexId id;
    try {
      id = io::parse_vertex(s);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (id.cls >= h.t() || id.idx >= h.class_size(id.cls)) throw UsageError("vertex " + s + " not in the instance");
    out.push_back(h.vertex(id.cls, id.idx));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ApproxConfig read_approx(Settings& s, const PartiteHypergraph& h, Seed seed) {
  ApproxConfig cfg;
  if (s.get<bool>("desk", true)) cfg = ApproxConfig::desk(h.t(), h.n(), s.get<double>("targetDegree", 20.0));
  cfg.epsilon = s.get<double>("epsilon", cfg.epsilon);
  cfg.gamma = s.get<double>("gamma", cfg.gamma);
  if (auto v = s.maybe<double>("copyProb")) cfg.copy_prob = v;
  if (auto v = s.maybe<std::uint32_t>("trimmedSize")) cfg.trimmed_size = v;
  if (auto v = s.maybe<std::size_t>("copyCount")) cfg.copy_count = v;
  cfg.theta = s.get<double>("theta", cfg.theta);
  cfg.improve_steps_per_vertex = s.get<std::size_t>("improveStepsPerVertex", cfg.improve_steps_per_vertex);
  cfg.host_refinement = s.get<bool>("hostRefinement", cfg.host_refinement);
  cfg.max_retries = s.get<std::size_t>("maxRetries", cfg.max_retries);
  cfg.max_flagged_fraction = s.get<double>("maxFlaggedFraction", cfg.max_flagged_fraction);
  cfg.clique_cap = s.get<std::size_t>("cliqueCap", cfg.clique_cap);
  cfg.seed = seed;
  return cfg;
}

Outcome run_gen(Settings& s, const Common& common) {
  GeneratorSpec spec;
  const auto mode = s.get<std::string>("mode", "complete");
  static const std::map<std::string, GeneratorSpec::Mode> modes = {
      {"complete", GeneratorSpec::Mode::Complete},
      {"extremal", GeneratorSpec::Mode::Extremal},
      {"random", GeneratorSpec::Mode::UniformRandom},
      {"codegree", GeneratorSpec::Mode::MinCodegreeTarget}};
  if (!modes.count(mode) && mode != "general") {
    throw UsageError("mode must be complete, extremal, random, codegree or general");
  }
  if (modes.count(mode)) spec.mode = modes.at(mode);
  spec.t = s.get<std::uint32_t>("t", 3);
  spec.k = s.get<std::uint32_t>("k", 2);
  spec.n = s.get<std::uint32_t>("n", 3);
  spec.edge_prob = s.get<double>("edgeProb", spec.edge_prob);
  spec.target = s.get<std::uint32_t>("target", spec.target);
  spec.margin = s.get<double>("margin", spec.margin);
  spec.max_sweeps = s.get<std::size_t>("maxSweeps", spec.max_sweeps);
  const auto format = s.get<std::string>("format", "json");
  if (format != "json" && format != "edges") throw UsageError("format must be json or edges");
  spec.seed = common.seed;
  s.finish();

  Outcome o;
  if (mode == "general") {
    // n counts all vertices here; target > 0 asks for δ_{k-1} >= target.
    if (spec.k < 1 || spec.k > spec.n) throw UsageError("general mode needs 1 <= k <= n");
    const auto g = spec.target > 0
                       ? random_general_with_min_codegree(spec.n, spec.k, spec.target, spec.seed, spec.margin)
                       : random_general(spec.n, spec.k, spec.edge_prob, spec.seed);
    o.instance = io::general_to_json(g);
    if (format == "edges") {
      std::string text = std::to_string(g.n()) + " " + std::to_string(g.k()) + "\n";
      for (std::size_t j = 0; j < g.edge_count(); ++j) {
        const auto e = g.edge(j);
        for (std::size_t i = 0; i < e.size(); ++i) text += (i ? " " : "") + std::to_string(e[i]);
        text += "\n";
      }
      o.edge_list = std::move(text);
    }
    o.result = {{"spec", s.echo()}, {"edges", g.edge_count()}, {"minCodegree", g.min_degree(g.k() - 1)}};
    o.verdict = "generated";
    return o;
  }

  std::size_t repairs = 0;
  std::optional<PartiteHypergraph> h;
  if (spec.mode == GeneratorSpec::Mode::MinCodegreeTarget) {
    spec.check();
    auto r = random_with_min_codegree(spec.t, spec.k, spec.n, spec.target, spec.seed, spec.margin, spec.max_sweeps);
    repairs = r.repairs;
    h.emplace(std::move(r.graph));
  } else {
    h.emplace(generate(spec));
  }
  o.instance = io::instance_to_json(*h);
  if (format == "edges") o.edge_list = io::instance_to_edge_list(*h);
  o.result = {{"spec", s.echo()},
              {"edges", h->edge_count()},
              {"minCodegree", min_codegree(*h, h->k() - 1).overall},
              {"repairs", repairs}};
  o.verdict = "generated";
  return o;
}

Outcome run_check(Settings& s, const PartiteHypergraph& h) {
  const auto cap = s.get<std::size_t>("cliqueCap", 1'000'000);
  s.finish();
  json levels = json::array();
  for (std::uint32_t l = 1; l < h.k(); ++l) {
    const auto rep = min_codegree(h, l);
    json per = json::array();
    for (const auto& p : rep.per_class_set) per.push_back({{"classes", p.classes}, {"minimum", p.minimum}});
    levels.push_back({{"level", l},
                      {"overall", rep.overall},
                      {"perClassSet", std::move(per)},
                      {"witness", {{"set", vertex_list(h, rep.witness_set.vertices)}, {"classes", rep.witness_classes}}}});
  }
  const auto cliques = enumerate_cliques(h, cap);
  Outcome o;
  o.result = {{"balanced", h.balanced()},
              {"t", h.t()},
              {"k", h.k()},
              {"classSizes", h.class_sizes()},
              {"edges", h.edge_count()},
              {"codegree", std::move(levels)},
              {"cliques", cliques.cliques.size()},
              {"cliquesTruncated", cliques.truncated}};
  o.verdict = "valid";
  return o;
}

Outcome run_lp(Settings& s, const PartiteHypergraph& h) {
  LpOptions options;
  options.clique_cap = s.get<std::size_t>("cliqueCap", options.clique_cap);
  s.finish();
  const auto lp = solve_fractional(h, options);
  Outcome o;
  o.result = {{"cliqueCount", lp.clique_count}, {"pivots", lp.pivots}};
  if (lp.feasible()) {
    json support = json::array();
    for (std::size_t i = 0; i < lp.assignment.cliques.size(); ++i) {
      support.push_back({{"clique", vertex_list(h, lp.assignment.cliques[i])},
                         {"weight", to_string(lp.assignment.weights[i])}});
    }
    const auto check = verify_assignment(h, lp.assignment, true);
    o.result["status"] = "feasible";
    o.result["assignment"] = std::move(support);
    o.result["size"] = to_string(check.size);
    o.result["verified"] = check.valid;
    o.verdict = "feasible";
  } else {
    const auto raw_check = verify_certificate(h, lp.certificate);
    const auto normalized = normalize_certificate(h, lp.certificate);
    const auto norm_check = verify_certificate(h, normalized);
    o.result["status"] = "infeasible";
    o.result["certificate"] = {
        {"raw", {{"weights", weights_json(h, lp.certificate)},
                 {"total", to_string(raw_check.total)},
                 {"minCliqueSum", to_string(raw_check.min_clique_sum)},
                 {"verified", raw_check.valid}}},
        {"normalized", {{"weights", weights_json(h, normalized)},
                        {"total", to_string(norm_check.total)},
                        {"minCliqueSum", to_string(norm_check.min_clique_sum)},
                        {"verified", norm_check.valid}}}};
    o.verdict = "infeasible";
    o.exit_code = 1;
  }
  return o;
}

Outcome run_exact(Settings& s, const PartiteHypergraph& h) {
  ExactOptions options;
  const auto mode = s.get<std::string>("mode", "find");
  options.node_budget = s.get<std::uint64_t>("budget", options.node_budget);
  options.clique_cap = s.get<std::size_t>("cliqueCap", options.clique_cap);
  const auto count_cap = s.get<std::uint64_t>("countCap", 1'000'000);
  const auto max_uncovered = s.get<std::size_t>("maxUncovered", 0);
  s.finish();
  Outcome o;
  if (mode == "find") {
    try {
      const auto r = find_perfect_factor(h, options);
      const bool found = r.status == SearchStatus::Found;
      o.result = {{"status", found ? "found" : "none"}, {"matching", matching_json(h, r.matching)}, {"nodes", r.nodes}};
      o.verdict = found ? "found" : "none";
      o.exit_code = found ? 0 : 1;
    } catch (const BudgetExhausted&) {
      o.result = {{"status", "budget"}, {"matching", json::array()}, {"nodes", options.node_budget}};
      o.verdict = "budget";
      o.exit_code = 2;
    }
  } else if (mode == "count") {
    const auto r = count_perfect_factors(h, count_cap, options);
    o.result = {{"status", r.budget_exhausted ? "budget" : "complete"},
                {"count", r.count},
                {"capped", r.capped},
                {"nodes", r.nodes}};
    o.verdict = r.count > 0 ? "found" : r.budget_exhausted ? "budget" : "none";
    o.exit_code = r.count > 0 ? 0 : r.budget_exhausted ? 2 : 1;
  } else if (mode == "almost") {
    const auto r = find_almost_factor(h, max_uncovered, options);
    o.result = {{"status", r.optimal ? "optimal" : "budget"},
                {"matching", matching_json(h, r.matching)},
                {"uncovered", r.uncovered},
                {"meetsTarget", r.meets_target},
                {"nodes", r.nodes}};
    o.verdict = r.meets_target ? "found" : "none";
    o.exit_code = r.meets_target ? 0 : 1;
  } else {
    throw UsageError("exact mode must be find, count or almost");
  }
  return o;
}

Outcome run_absorb(Settings& s, const PartiteHypergraph& h, Seed seed) {
  AbsorptionConfig cfg;
  cfg.gamma = s.get<double>("gamma", cfg.gamma);
  cfg.selection_prob = s.maybe<double>("selectionProb");
  cfg.family_size_budget = s.maybe<std::size_t>("familySizeBudget");
  cfg.leftover_capacity = s.get<std::size_t>("leftoverCapacity", cfg.leftover_capacity);
  cfg.max_retries = s.get<std::size_t>("maxRetries", cfg.max_retries);
  cfg.audit_size = s.get<std::size_t>("auditSize", cfg.audit_size);
  cfg.seed = seed;
  const auto target = s.maybe<std::vector<std::string>>("target");
  const auto search_budget = s.get<std::size_t>("searchBudget", 1000);
  const auto exhaustive = s.get<bool>("exhaustive", false);
  s.finish();

  Outcome o;
  if (target) {
    const auto tset = parse_vertex_list(h, *target);
    const auto found = find_absorbing_sets(h, tset, search_budget, seed, exhaustive);
    json sets = json::array();
    for (const auto& a : found.sets) sets.push_back(vertex_list(h, a));
    o.result["absorbingSets"] = {{"target", vertex_list(h, tset)},
                                 {"sets", std::move(sets)},
                                 {"count", found.sets.size()},
                                 {"attempts", found.attempts},
                                 {"budgetExhausted", found.budget_exhausted}};
  }
  try {
    const auto fam = build_absorbing_family(h, cfg);
    json members = json::array();
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
      members.push_back({{"vertices", vertex_list(h, fam.members[i])},
                         {"matching", matching_json(h, fam.member_matchings[i])}});
    }
    json audit = json::array();
    for (const auto& a : fam.audit) audit.push_back({{"target", vertex_list(h, a.target)}, {"absorbers", a.absorbers}});
    o.result["status"] = "built";
    o.result["family"] = {{"members", std::move(members)},
                          {"absorberVertices", fam.vertices.size()},
                          {"targetMembers", fam.target_members},
                          {"sampled", fam.sampled},
                          {"discardedIntersecting", fam.discarded_intersecting},
                          {"discardedNonAbsorbing", fam.discarded_non_absorbing},
                          {"attempts", fam.attempts},
                          {"leftoverCapacity", fam.leftover_capacity},
                          {"audit", std::move(audit)}};
    o.verdict = "built";
  } catch (const RetriesExhausted& e) {
    o.result["status"] = "retries-exhausted";
    o.result["message"] = e.what();
    o.verdict = "failed";
    o.exit_code = 1;
  }
  return o;
}

json approx_json(const PartiteHypergraph& h, const ApproxResult& r) {
  const auto& st = r.copy_stats;
  std::size_t min_y = st.membership.empty() ? 0 : *std::min_element(st.membership.begin(), st.membership.end());
  std::size_t max_y = st.membership.empty() ? 0 : *std::max_element(st.membership.begin(), st.membership.end());
  json regularity = {{"meanDegree", r.regularity.mean_degree},
                     {"tau", r.regularity.tau_defined ? json(r.regularity.tau) : json(nullptr)},
                     {"minDegree", r.regularity.min_degree},
                     {"maxDegree", r.regularity.max_degree},
                     {"maxPairDegree", r.regularity.max_pair_degree}};
  return {{"matching", matching_json(h, r.matching)},
          {"uncovered", r.uncovered},
          {"uncoveredPerClass", r.uncovered_per_class},
          {"withinEpsilon", r.within_epsilon},
          {"params", {{"copyProb", r.params.copy_prob}, {"trimmedSize", r.params.trimmed_size},
                      {"copyCount", r.params.copy_count}}},
          {"copyStats", {{"minMembership", min_y},
                         {"maxMembership", max_y},
                         {"pairsInThreeOrMore", st.pairs_in_three_or_more},
                         {"triplesInTwoOrMore", st.triples_in_two_or_more},
                         {"flagged", st.flagged_count},
                         {"redraws", st.redraws}}},
          {"regularityStats", std::move(regularity)},
          {"sparseEdges", r.sparse_edges},
          {"multiCopyCliques", r.multi_copy_cliques},
          {"nibbleUncovered", r.nibble_uncovered},
          {"violations", r.violations}};
}

Outcome run_approx(Settings& s, const PartiteHypergraph& h, Seed seed) {
  const auto cfg = read_approx(s, h, seed);
  s.finish();
  Outcome o;
  try {
    const auto r = almost_perfect_factor(h, cfg);
    o.result = approx_json(h, r);
    o.result["status"] = "done";
    o.verdict = r.within_epsilon ? "within-epsilon" : "above-epsilon";
    o.exit_code = r.within_epsilon ? 0 : 1;
  } catch (const RetriesExhausted& e) {
    o.result = {{"status", "retries-exhausted"}, {"message", e.what()}};
    o.verdict = "failed";
    o.exit_code = 1;
  }
  return o;
}

Outcome run_partition(Settings& s, const GeneralHypergraph& h, Seed seed) {
  PartitionConfig cfg;
  cfg.t = s.get<std::uint32_t>("t", cfg.t);
  cfg.max_retries = s.get<std::size_t>("maxRetries", cfg.max_retries);
  cfg.exhaustive_audit_limit = s.get<std::uint32_t>("exhaustiveAuditLimit", cfg.exhaustive_audit_limit);
  cfg.audit_samples = s.get<std::size_t>("auditSamples", cfg.audit_samples);
  cfg.seed = seed;
  const bool cover = s.get<bool>("cover", false);
  const double epsilon = s.get<double>("epsilon", 0.1);
  const double target_degree = s.get<double>("targetDegree", 20.0);
  s.finish();
  if (cfg.t == 0) throw UsageError("t must be positive");

  auto summarize = [&](const PartitionResult& p) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& e : p.decomposition.entries) worst = std::min(worst, e.worst_slack);
    const auto& pr = p.preservation;
    return json{{"assignment", p.assignment},
                {"classes", p.classes},
                {"sampledSizes", p.sampled_sizes},
                {"moved", p.moved},
                {"attempts", p.attempts},
                {"partiteEdges", p.partite.edge_count()},
                {"decomposition", {{"auditedSets", p.decomposition.entries.size()},
                                   {"badSets", p.decomposition.bad_sets},
                                   {"exhaustive", p.decomposition.exhaustive},
                                   {"worstSlack", std::isfinite(worst) ? json(worst) : json(nullptr)}}},
                {"preservation", {{"checked", pr.checked},
                                  {"violations", pr.violations},
                                  {"exhaustive", pr.exhaustive},
                                  {"worstMargin", std::isfinite(pr.worst_margin) ? json(pr.worst_margin) : json(nullptr)},
                                  {"worstSet", pr.worst_set},
                                  {"worstClasses", pr.worst_classes},
                                  {"worstLhs", pr.worst_lhs},
                                  {"worstRhs", pr.worst_rhs}}}};
  };

  Outcome o;
  try {
    if (cover) {
      if (h.n() % cfg.t != 0) throw UsageError("t must divide n");
      auto approx = ApproxConfig::desk(cfg.t, h.n() / cfg.t, target_degree);
      approx.epsilon = epsilon;
      approx.seed = derive_seed(seed, "cover-approx");
      const auto r = cover_almost_all(h, cfg.t, approx, cfg);
      o.result = summarize(r.partition);
      o.result["cover"] = {{"matching", r.matching.cliques},
                           {"uncovered", r.uncovered},
                           {"withinEpsilon", r.within_epsilon},
                           {"problems", r.problems}};
      o.verdict = r.within_epsilon && r.problems.empty() ? "covered" : "not-covered";
      o.exit_code = o.verdict == "covered" ? 0 : 1;
    } else {
      o.result = summarize(random_equipartition(h, cfg));
      o.verdict = "partitioned";
    }
    o.result["status"] = "done";
  } catch (const RetriesExhausted& e) {
    o.result = {{"status", "retries-exhausted"}, {"message", e.what()}};
    o.verdict = "failed";
    o.exit_code = 1;
  }
  return o;
}

Outcome run_pipeline(Settings& s, const PartiteHypergraph& h, Seed seed) {
  if (!h.balanced()) throw UsageError("pipeline needs a balanced instance");
  PipelineConfig cfg = s.get<bool>("desk", true) ? PipelineConfig::desk(h.t(), h.n()) : PipelineConfig{};
  cfg.gamma = s.get<double>("gamma", cfg.gamma);
  if (auto v = s.maybe<std::size_t>("leftoverCapacity")) cfg.leftover_capacity = v;
  cfg.max_outer_retries = s.get<std::size_t>("maxOuterRetries", cfg.max_outer_retries);
  cfg.absorption.max_retries = s.get<std::size_t>("absorptionRetries", cfg.absorption.max_retries);
  cfg.absorption.audit_size = s.get<std::size_t>("auditSize", cfg.absorption.audit_size);
  cfg.approx.theta = s.get<double>("theta", cfg.approx.theta);
  cfg.approx.improve_steps_per_vertex = s.get<std::size_t>("improveStepsPerVertex", cfg.approx.improve_steps_per_vertex);
  cfg.approx.host_refinement = s.get<bool>("hostRefinement", cfg.approx.host_refinement);
  if (auto v = s.maybe<double>("copyProb")) cfg.approx.copy_prob = v;
  if (auto v = s.maybe<std::uint32_t>("trimmedSize")) cfg.approx.trimmed_size = v;
  if (auto v = s.maybe<std::size_t>("copyCount")) cfg.approx.copy_count = v;
  cfg.seed = seed;
  s.finish();

  const auto r = perfect_factor(h, cfg);
  Outcome o;
  o.result = {{"status", r.success ? "success" : "failure"},
              {"matching", matching_json(h, r.matching)},
              {"attempts", r.attempts},
              {"absorberVertices", r.absorber_vertices},
              {"leftover", r.leftover},
              {"diagnostics", r.diagnostics}};
  o.verdict = r.success ? "success" : "failure";
  o.exit_code = r.success ? 0 : 1;
  return o;
}

Outcome run_scan(Settings& s, const Common& common) {
  ScanConfig cfg;
  cfg.t = s.get<std::uint32_t>("t", cfg.t);
  cfg.k = s.get<std::uint32_t>("k", cfg.k);
  cfg.n_values = s.get<std::vector<std::uint32_t>>("nValues", {3});
  cfg.deltas = s.get<std::vector<std::uint32_t>>("deltas", {});
  cfg.delta_fractions = s.get<std::vector<double>>("deltaFractions", {});
  cfg.samples = s.get<std::size_t>("samples", cfg.samples);
  cfg.exact_max_vertices = s.get<std::uint32_t>("exactMaxVertices", cfg.exact_max_vertices);
  cfg.pipeline_min_n = s.get<std::uint32_t>("pipelineMinN", cfg.pipeline_min_n);
  cfg.include_extremal = s.get<bool>("includeExtremal", cfg.include_extremal);
  cfg.seed = common.seed;
  cfg.timing = common.timing;
  s.finish();

  const auto rows = threshold_scan(cfg);
  Outcome o;
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"n", r.n},
                     {"deltaTilde", r.delta},
                     {"samples", r.samples},
                     {"exactSuccess", r.exact_success ? json(*r.exact_success) : json(nullptr)},
                     {"pipelineSuccess", r.pipeline_success ? json(*r.pipeline_success) : json(nullptr)}});
  }
  o.result = {{"rows", std::move(table)}};
  o.csv = scan_to_csv(rows, cfg.timing);
  o.verdict = "scanned";
  return o;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

struct Flag {
  const char* name;
  const char* key;
  enum Kind { Int, Real, Text, Switch } kind;
  const char* help;
};

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perfect clique factors in balanced partite hypergraphs", "cliquefactor"};
  app.require_subcommand(1);
  Common common;
  std::string instance_path;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> switches;

  static const std::map<std::string, std::vector<Flag>> flags = {
      {"gen",
       {{"--mode", "mode", Flag::Text, "complete|extremal|random|codegree|general"},
        {"-t", "t", Flag::Int, "number of classes"},
        {"-k", "k", Flag::Int, "uniformity"},
        {"-n", "n", Flag::Int, "class size"},
        {"--edge-prob", "edgeProb", Flag::Real, "edge probability (random)"},
        {"--target", "target", Flag::Int, "codegree target (codegree)"},
        {"--format", "format", Flag::Text, "json|edges"}}},
      {"check", {}},
      {"lp", {}},
      {"exact",
       {{"--mode", "mode", Flag::Text, "find|count|almost"},
        {"--budget", "budget", Flag::Int, "node budget"},
        {"--max-uncovered", "maxUncovered", Flag::Int, "target for --mode almost"}}},
      {"absorb",
       {{"--gamma", "gamma", Flag::Real, "codegree slack"},
        {"--leftover-capacity", "leftoverCapacity", Flag::Int, "largest leftover to absorb"}}},
      {"approx", {{"--epsilon", "epsilon", Flag::Real, "allowed uncovered fraction per class"}}},
      {"partition",
       {{"-t", "t", Flag::Int, "number of classes"},
        {"--cover", "cover", Flag::Switch, "also cover almost all vertices with K_t^k copies"}}},
      {"pipeline", {{"--gamma", "gamma", Flag::Real, "codegree slack"}}},
      {"scan", {}},
  };
  static const std::map<std::string, std::string> about = {
      {"gen", "generate an instance"},
      {"check", "validate an instance and report codegrees"},
      {"lp", "perfect fractional matching or Farkas certificate"},
      {"exact", "exact factor search, counting or maximum matching"},
      {"absorb", "build an absorbing family"},
      {"approx", "near-perfect matching by sparsification and nibble"},
      {"partition", "codegree-preserving equipartition of a general k-graph"},
      {"pipeline", "perfect factor via absorption"},
      {"scan", "empirical threshold scan (CSV)"},
  };

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, list] : flags) {
    auto* sub = app.add_subcommand(name, about.at(name));
    subs[name] = sub;
    sub->add_option("--seed", common.seed, "seed for every random stage");
    sub->add_option("--config", common.config_path, "JSON config file");
    sub->add_option("--out", common.out_dir, "artifact directory");
    sub->add_flag("--timing", common.timing, "record wall-clock times");
    if (name != "gen" && name != "scan") sub->add_option("instance", instance_path, "instance file")->required();
    for (const auto& f : list) {
      if (f.kind == Flag::Switch) {
        sub->add_flag(f.name, switches[f.key], f.help);
      } else {
        sub->add_option(f.name, flag_values[std::string(name) + "/" + f.key], f.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string name;
  for (const auto& [n, sub] : subs) {
    if (sub->parsed()) name = n;
  }
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  json config_echo;
  std::optional<std::string> instance_hash;
  try {
    json given = json::object();
    if (!common.config_path.empty()) {
      try {
        given = json::parse(io::read_file(common.config_path));
      } catch (const json::parse_error& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
    }
    for (const auto& f : flags.at(name)) {
      auto* opt = subs[name]->get_option_no_throw(f.name);
      if (!opt || opt->count() == 0) continue;
      if (f.kind == Flag::Switch) {
        given[f.key] = true;
        continue;
      }
      const auto& text = flag_values[name + "/" + f.key];
      try {
        if (f.kind == Flag::Int) {
          given[f.key] = std::stoull(text);
        } else if (f.kind == Flag::Real) {
          given[f.key] = std::stod(text);
        } else {
          given[f.key] = text;
        }
      } catch (const std::logic_error&) {
        throw UsageError(std::string("bad value for ") + f.name + ": '" + text + "'");
      }
    }
    Settings settings(std::move(given));

    if (name == "gen") {
      outcome = run_gen(settings, common);
    } else if (name == "scan") {
      outcome = run_scan(settings, common);
    } else if (name == "partition") {
      const auto h = io::load_general(instance_path);
      outcome = run_partition(settings, h, common.seed);
      outcome.instance = io::general_to_json(h);
    } else {
      const auto h = io::load_instance(instance_path);
      outcome.instance = io::instance_to_json(h);
      json instance = *outcome.instance;
      if (name == "check") outcome = run_check(settings, h);
      if (name == "lp") outcome = run_lp(settings, h);
      if (name == "exact") outcome = run_exact(settings, h);
      if (name == "absorb") outcome = run_absorb(settings, h, common.seed);
      if (name == "approx") outcome = run_approx(settings, h, common.seed);
      if (name == "pipeline") outcome = run_pipeline(settings, h, common.seed);
      outcome.instance = std::move(instance);
    }
    config_echo = settings.echo();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const io::ParseError& e) {
    err << "error: " << instance_path << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (outcome.instance) instance_hash = hex64(fnv1a(outcome.instance->dump()));

  json record = {{"subcommand", name},
                 {"config", config_echo},
                 {"seed", common.seed},
                 {"instanceHash", instance_hash ? json(*instance_hash) : json(nullptr)},
                 {"verdict", outcome.verdict},
                 {"exitCode", outcome.exit_code},
                 {"simd", kernels::isa_name(kernels::active_isa())}};
  if (common.timing) {
    record["wallClockMs"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }

  if (common.out_dir.empty()) {
    if (name == "gen") {
      out << (outcome.edge_list ? *outcome.edge_list : outcome.instance->dump(2) + "\n");
    } else if (outcome.csv) {
      out << *outcome.csv;
    } else {
      out << outcome.result.dump(2) << "\n";
    }
    return outcome.exit_code;
  }

  try {
    const std::filesystem::path dir(common.out_dir);
    std::filesystem::create_directories(dir);
    json outputs = json::array();
    if (outcome.instance) {
      write_file(dir / "instance.json", outcome.instance->dump(2) + "\n");
      outputs.push_back("instance.json");
    }
    if (outcome.edge_list) {
      write_file(dir / "instance.txt", *outcome.edge_list);
      outputs.push_back("instance.txt");
    }
    write_file(dir / "result.json", outcome.result.dump(2) + "\n");
    outputs.push_back("result.json");
    if (outcome.csv) {
      write_file(dir / "scan.csv", *outcome.csv);
      outputs.push_back("scan.csv");
    }
    outputs.push_back("runrecord.json");
    record["outputs"] = {{"directory", common.out_dir}, {"files", std::move(outputs)}};
    write_file(dir / "runrecord.json", record.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  out << name << ": " << outcome.verdict << "\n";
  return outcome.exit_code;
}

}  // namespace cliquefactor::cli

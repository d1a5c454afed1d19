// Acceptance run: one PASS/FAIL line per criterion. Thresholds and time
// limits are pinned below; a criterion fails on its own numbers, never on a
// crash elsewhere.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cliquefactor/absorption.hpp"
#include "cliquefactor/approx.hpp"
#include "cliquefactor/cli.hpp"
#include "cliquefactor/constructions.hpp"
#include "cliquefactor/errors.hpp"
#include "cliquefactor/exact.hpp"
#include "cliquefactor/fractional.hpp"
#include "cliquefactor/io.hpp"
#include "cliquefactor/partition.hpp"
#include "cliquefactor/pipeline.hpp"

namespace cf = cliquefactor;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kCase1Seconds = 10;
constexpr double kCase2Seconds = 300;
constexpr double kCase3Seconds = 300;
constexpr double kCase4Seconds = 120;
constexpr double kCase5Seconds = 300;
constexpr double kCase5MinSuccess = 0.90;
constexpr double kCase6Seconds = 600;
constexpr double kCase6MinSuccess = 0.90;
constexpr double kCase6Epsilon = 0.1;
constexpr double kCase7RunSeconds = 60;
constexpr double kCase7MinSuccess = 0.95;
constexpr double kCase8Seconds = 300;
constexpr double kCase9Seconds = 120;
constexpr double kCase9MinCoverage = 0.95;
constexpr double kCase9MinSuccess = 0.90;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::uint32_t ceil_div(std::uint32_t a, std::uint32_t b) { return (a + b - 1) / b; }

std::set<std::vector<cf::Vertex>> edge_set(const cf::PartiteHypergraph& h) {
  std::set<std::vector<cf::Vertex>> out;
  for (std::size_t i = 0; i < h.edge_count(); ++i) out.emplace(h.edge(i).begin(), h.edge(i).end());
  return out;
}

bool triangle(const std::set<std::vector<cf::Vertex>>& e, cf::Vertex a, cf::Vertex b, cf::Vertex c) {
  return e.count({a, b}) && e.count({a, c}) && e.count({b, c});
}

// Perfect triangle factors of a balanced tripartite graph, by trying every
// pairing of the classes (vertex ids in class order).
std::uint64_t count_triangle_factors(const cf::PartiteHypergraph& h) {
  const auto e = edge_set(h);
  const std::uint32_t n = h.n();
  std::vector<std::uint32_t> p1(n), p2(n);
  std::iota(p1.begin(), p1.end(), 0u);
  std::uint64_t count = 0;
  do {
    std::iota(p2.begin(), p2.end(), 0u);
    do {
      bool ok = true;
      for (std::uint32_t i = 0; i < n && ok; ++i) ok = triangle(e, i, n + p1[i], 2 * n + p2[i]);
      count += ok;
    } while (std::next_permutation(p2.begin(), p2.end()));
  } while (std::next_permutation(p1.begin(), p1.end()));
  return count;
}

// 1. Extremal construction: codegree, LP infeasibility, certificate.
Verdict case1() {
  Verdict v{true, ""};
  const std::vector<std::array<std::uint32_t, 3>> cases = {{3, 2, 3}, {3, 2, 6}, {4, 2, 4}, {4, 3, 4}};
  double worst = 0;
  for (auto [t, k, n] : cases) {
    const auto start = Clock::now();
    const auto h = cf::extremal_fractional(t, k, n);
    const std::uint32_t expected = ceil_div((t - k + 1) * n, t) - 1;
    const bool ok = cf::min_codegree(h, k - 1).overall == expected && !cf::solve_fractional(h).feasible() &&
                    cf::verify_certificate(h, cf::extremal_certificate(t, k, n)).valid;
    const double s = seconds_since(start);
    worst = std::max(worst, s);
    if (!ok || s >= kCase1Seconds) {
      v.pass = false;
      v.detail += " failed (" + std::to_string(t) + "," + std::to_string(k) + "," + std::to_string(n) + ")";
    }
  }
  v.detail = "4 cases, slowest " + fmt("%.3fs", worst) + v.detail;
  return v;
}

// 2. t=3, k=2 threshold: one below is infeasible, at threshold always feasible.
Verdict case2() {
  const auto start = Clock::now();
  std::size_t feasible = 0, total = 0;
  bool extremal_ok = true;
  for (std::uint32_t n : {3u, 6u}) {
    const std::uint32_t threshold = ceil_div(2 * n, 3);
    const auto ext = cf::extremal_fractional(3, 2, n);
    extremal_ok = extremal_ok && cf::min_codegree(ext, 1).overall == threshold - 1 &&
                  !cf::solve_fractional(ext).feasible();
    for (cf::Seed s = 0; s < 200; ++s) {
      // Densities from the threshold upwards so instances sit near it.
      const auto h = cf::random_with_min_codegree(3, 2, n, threshold, cf::derive_seed(2, "case2", n * 1000 + s), 0.0)
                         .graph;
      if (cf::min_codegree(h, 1).overall < threshold) continue;
      ++total;
      const auto r = cf::solve_fractional(h);
      feasible += r.feasible() && cf::verify_assignment(h, r.assignment, true).valid;
    }
  }
  const double s = seconds_since(start);
  return {extremal_ok && total == 400 && feasible == total && s < kCase2Seconds,
          "extremal infeasible: " + std::string(extremal_ok ? "yes" : "no") + ", feasible " +
              std::to_string(feasible) + "/" + std::to_string(total) + ", " + fmt("%.1fs", s)};
}

// 3. t=4, k=3 upper bound.
Verdict case3() {
  const auto start = Clock::now();
  std::size_t feasible = 0, total = 0;
  for (std::uint32_t n : {4u, 6u}) {
    // ceil((1 - 1/C(3,2)) n) + 1 = ceil(2n/3) + 1
    const std::uint32_t target = ceil_div(2 * n, 3) + 1;
    for (cf::Seed s = 0; s < 100; ++s) {
      const auto h = cf::random_with_min_codegree(4, 3, n, target, cf::derive_seed(3, "case3", n * 1000 + s), 0.0).graph;
      if (cf::min_codegree(h, 2).overall < target) continue;
      ++total;
      const auto r = cf::solve_fractional(h);
      feasible += r.feasible() && cf::verify_assignment(h, r.assignment, true).valid;
    }
  }
  const double s = seconds_since(start);
  return {total == 200 && feasible == total && s < kCase3Seconds,
          "feasible " + std::to_string(feasible) + "/" + std::to_string(total) + ", " + fmt("%.1fs", s)};
}

// 4. Exact solver against exhaustion on every t=3, k=2, n=2 instance.
Verdict case4() {
  const auto start = Clock::now();
  std::size_t agree = 0;
  for (std::uint32_t mask = 0; mask < 4096; ++mask) {
    std::vector<std::vector<cf::Vertex>> edges;
    int bit = 0;
    for (cf::Vertex a = 0; a < 6; ++a) {
      for (cf::Vertex b = a + 1; b < 6; ++b) {
        if (a / 2 == b / 2) continue;
        if (mask >> bit++ & 1) edges.push_back({a, b});
      }
    }
    const cf::PartiteHypergraph h(3, 2, {2, 2, 2}, std::move(edges));
    const auto expected = count_triangle_factors(h);
    const auto found = cf::find_perfect_factor(h);
    const bool exists = found.status == cf::SearchStatus::Found;
    bool ok = exists == (expected > 0) && cf::count_perfect_factors(h, 1000).count == expected;
    if (exists) {
      const auto rep = cf::verify_matching(h, found.matching);
      ok = ok && rep.valid && rep.perfect;
    }
    agree += ok;
  }
  const double s = seconds_since(start);
  return {agree == 4096 && s < kCase4Seconds, std::to_string(agree) + "/4096 agree, " + fmt("%.1fs", s)};
}

// 5. Absorption: exact |L(T)| and leftover round trips.
Verdict case5() {
  const auto start = Clock::now();
  // Complete t=3, n=4, T = first vertex of each class.
  const auto h = cf::complete_partite(3, 2, 4);
  const std::vector<cf::Vertex> target = {0, 4, 8};
  const auto e = edge_set(h);
  std::size_t library = 0, brute = 0;
  // A takes two of the three remaining vertices in each class.
  const std::vector<std::array<std::uint32_t, 2>> pairs = {{1, 2}, {1, 3}, {2, 3}};
  for (auto p0 : pairs) {
    for (auto p1 : pairs) {
      for (auto p2 : pairs) {
        std::vector<cf::Vertex> a = {p0[0], p0[1], 4 + p1[0], 4 + p1[1], 8 + p2[0], 8 + p2[1]};
        library += cf::is_absorbing(h, a, target);
        // Brute force: A splits into 2 triangles and A+T into 3.
        auto splits = [&](std::vector<std::vector<cf::Vertex>> cls) {
          const std::size_t m = cls[0].size();
          std::vector<std::size_t> q1(m), q2(m);
          std::iota(q1.begin(), q1.end(), 0u);
          do {
            std::iota(q2.begin(), q2.end(), 0u);
            do {
              bool ok = true;
              for (std::size_t i = 0; i < m && ok; ++i) ok = triangle(e, cls[0][i], cls[1][q1[i]], cls[2][q2[i]]);
              if (ok) return true;
            } while (std::next_permutation(q2.begin(), q2.end()));
          } while (std::next_permutation(q1.begin(), q1.end()));
          return false;
        };
        const bool alone = splits({{a[0], a[1]}, {a[2], a[3]}, {a[4], a[5]}});
        const bool with = splits({{0, a[0], a[1]}, {4, a[2], a[3]}, {8, a[4], a[5]}});
        brute += alone && with;
      }
    }
  }
  const double bound = cf::absorbing_count_lower_bound(3, 4, 0.5);
  const bool count_ok = library == brute && static_cast<double>(library) >= bound;

  std::size_t ok = 0;
  for (cf::Seed s = 0; s < 20; ++s) {
    const std::uint32_t n = 30;
    const auto host = cf::random_with_min_codegree(3, 2, n, 27, cf::derive_seed(5, "case5-host", s)).graph;
    cf::AbsorptionConfig cfg;
    cfg.leftover_capacity = 6;
    cfg.seed = cf::derive_seed(5, "case5-family", s);
    try {
      const auto fam = cf::build_absorbing_family(host, cfg);
      cf::Rng rng(cf::derive_seed(5, "case5-leftover", s));
      const std::uint32_t per_class = 1 + static_cast<std::uint32_t>(rng.below(2));
      std::vector<cf::Vertex> w;
      for (std::uint32_t c = 0; c < 3; ++c) {
        std::vector<cf::Vertex> free;
        for (std::uint32_t i = 0; i < n; ++i) {
          const auto v = host.vertex(c, i);
          if (!std::binary_search(fam.vertices.begin(), fam.vertices.end(), v)) free.push_back(v);
        }
        rng.shuffle(free);
        w.insert(w.end(), free.begin(), free.begin() + per_class);
      }
      std::sort(w.begin(), w.end());
      const auto m = cf::absorb_leftover(host, fam, w);
      const auto rep = cf::verify_matching(host, m);
      ok += rep.valid && rep.covered == fam.vertices.size() + w.size();
    } catch (const std::exception&) {
    }
  }
  const double s = seconds_since(start);
  const double rate = ok / 20.0;
  return {count_ok && rate >= kCase5MinSuccess && s < kCase5Seconds,
          "|L(T)| library " + std::to_string(library) + " brute " + std::to_string(brute) + " bound " +
              fmt("%.4f", bound) + "; round trips " + std::to_string(ok) + "/20, " + fmt("%.1fs", s)};
}

// 6. Near-perfect matching at n = 60.
Verdict case6() {
  const auto start = Clock::now();
  std::size_t within = 0;
  bool all_verified = true;
  for (cf::Seed s = 0; s < 20; ++s) {
    const auto h = cf::random_with_min_codegree(3, 2, 60, 51, cf::derive_seed(6, "case6-host", s)).graph;
    auto cfg = cf::ApproxConfig::desk(3, 60);
    cfg.epsilon = kCase6Epsilon;
    cfg.seed = cf::derive_seed(6, "case6-run", s);
    try {
      const auto r = cf::almost_perfect_factor(h, cfg);
      all_verified = all_verified && cf::verify_matching(h, r.matching).valid;
      std::vector<std::size_t> covered(3, 0);
      for (const auto& c : r.matching.cliques) {
        for (auto v : c) ++covered[h.class_of(v)];
      }
      bool ok = true;
      for (auto c : covered) ok = ok && 60 - c <= kCase6Epsilon * 60;
      within += ok;
    } catch (const cf::RetriesExhausted&) {
    }
  }
  const double s = seconds_since(start);
  const double rate = within / 20.0;
  return {rate >= kCase6MinSuccess && all_verified && s < kCase6Seconds,
          "within epsilon " + std::to_string(within) + "/20, cliques verified: " + (all_verified ? "yes" : "no") +
              ", " + fmt("%.1fs", s)};
}

// 7. Full pipeline at n = 60, plus soundness against the exact solver for n <= 9.
Verdict case7() {
  const auto start = Clock::now();
  std::size_t ok = 0;
  double slowest = 0;
  for (cf::Seed s = 0; s < 50; ++s) {
    const std::uint32_t target = static_cast<std::uint32_t>(std::ceil(0.77 * 60));
    const auto h = cf::random_with_min_codegree(3, 2, 60, target, cf::derive_seed(7, "case7-host", s)).graph;
    auto cfg = cf::PipelineConfig::desk(3, 60);
    cfg.seed = cf::derive_seed(7, "case7-run", s);
    const auto run_start = Clock::now();
    const auto r = cf::perfect_factor(h, cfg);
    const double rs = seconds_since(run_start);
    slowest = std::max(slowest, rs);
    const auto rep = cf::verify_matching(h, r.matching);
    ok += r.success && rep.valid && rep.perfect && rs < kCase7RunSeconds;
  }
  std::size_t small_runs = 0, confirmed = 0, false_success = 0;
  for (std::uint32_t n : {6u, 9u}) {
    const std::uint32_t target = static_cast<std::uint32_t>(std::ceil(0.77 * n));
    std::vector<cf::PartiteHypergraph> hosts;
    for (cf::Seed s = 0; s < 10; ++s) {
      hosts.push_back(cf::random_with_min_codegree(3, 2, n, target, cf::derive_seed(7, "case7-small", n * 100 + s)).graph);
    }
    hosts.push_back(cf::extremal_fractional(3, 2, n));
    for (std::size_t i = 0; i < hosts.size(); ++i) {
      auto cfg = cf::PipelineConfig::desk(3, n);
      cfg.seed = cf::derive_seed(7, "case7-small-run", n * 100 + i);
      const auto r = cf::perfect_factor(hosts[i], cfg);
      const bool exists = cf::find_perfect_factor(hosts[i]).status == cf::SearchStatus::Found;
      ++small_runs;
      if (r.success) {
        confirmed += exists;
        false_success += !exists;
      }
    }
  }
  const double rate = ok / 50.0;
  return {rate >= kCase7MinSuccess && false_success == 0,
          "perfect factors " + std::to_string(ok) + "/50 (slowest " + fmt("%.2fs", slowest) + "); small: " +
              std::to_string(confirmed) + " successes confirmed, " + std::to_string(false_success) +
              " unconfirmed over " + std::to_string(small_runs) + " runs, " + fmt("%.1fs", seconds_since(start))};
}

// 8. Degree preservation of the random equipartition.
Verdict case8() {
  const auto start = Clock::now();
  std::size_t ok = 0;
  for (cf::Seed s = 0; s < 20; ++s) {
    const auto h = cf::random_general(30, 3, 0.5, cf::derive_seed(8, "case8-host", s));
    cf::PartitionConfig cfg;
    cfg.t = 3;
    cfg.seed = cf::derive_seed(8, "case8-run", s);
    try {
      const auto r = cf::random_equipartition(h, cfg);
      const auto rep = cf::verify_degree_preservation(h, r, SIZE_MAX);
      bool sizes = true;
      for (const auto& c : r.classes) sizes = sizes && c.size() == 10;
      ok += rep.exhaustive && rep.holds() && sizes;
    } catch (const cf::RetriesExhausted&) {
    }
  }
  const double s = seconds_since(start);
  return {ok == 20 && s < kCase8Seconds, "preserved on " + std::to_string(ok) + "/20, " + fmt("%.1fs", s)};
}

// 9. Nibble on near-regular 3-graphs with 300 vertices.
Verdict case9() {
  const auto start = Clock::now();
  std::size_t ok = 0;
  double worst = 1;
  for (cf::Seed s = 0; s < 20; ++s) {
    const auto g = cf::near_regular_tgraph(3, 100, 20, 2, cf::derive_seed(9, "case9-graph", s));
    const auto r = cf::nibble_matching(g, cf::derive_seed(9, "case9-run", s));
    const double coverage = 1.0 - static_cast<double>(r.uncovered) / g.vertex_count();
    worst = std::min(worst, coverage);
    ok += coverage >= kCase9MinCoverage;
  }
  const double s = seconds_since(start);
  return {ok / 20.0 >= kCase9MinSuccess && s < kCase9Seconds,
          "coverage >= 95% on " + std::to_string(ok) + "/20 (worst " + fmt("%.3f", worst) + "), " + fmt("%.1fs", s)};
}

// 10. Every subcommand twice into the same directory: identical bytes.
Verdict case10() {
  const fs::path dir = fs::temp_directory_path() / ("cliquefactor-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto call = [](std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "cliquefactor");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = cf::cli::dispatch(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    return code;
  };
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  std::string text;
  call({"gen", "--mode", "codegree", "-n", "12", "--target", "10", "--seed", "1"}, &text);
  const auto host = put("host.json", text);
  call({"gen", "--mode", "general", "-n", "12", "-k", "3", "--edge-prob", "0.6", "--seed", "1"}, &text);
  const auto general = put("general.json", text);
  const auto scan = put("scan.json", "{\"nValues\": [3, 6], \"deltaFractions\": [0.67, 0.8], \"samples\": 2}");
  const std::vector<std::vector<std::string>> commands = {
      {"gen", "--mode", "codegree", "-n", "9", "--target", "7", "--seed", "2"},
      {"check", host},
      {"lp", host},
      {"exact", host, "--mode", "count"},
      {"absorb", host, "--leftover-capacity", "3", "--seed", "3"},
      {"approx", host, "--seed", "3"},
      {"partition", general, "-t", "3", "--cover", "--seed", "3"},
      {"pipeline", host, "--seed", "3"},
      {"scan", "--config", scan, "--seed", "3"},
  };
  std::size_t identical = 0;
  std::string mismatched;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto out = dir / ("out-" + commands[i][0]);
    std::string snapshot[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      fs::remove_all(out);
      auto args = commands[i];
      args.push_back("--out");
      args.push_back(out.string());
      codes[rep] = call(args);
      for (const auto& entry : fs::directory_iterator(out)) {
        std::ifstream f(entry.path(), std::ios::binary);
        snapshot[rep] += entry.path().filename().string() + "\n" +
                         std::string(std::istreambuf_iterator<char>(f), {});
      }
    }
    if (codes[0] != 2 && codes[0] == codes[1] && !snapshot[0].empty() && snapshot[0] == snapshot[1]) {
      ++identical;
    } else {
      mismatched += " " + commands[i][0];
    }
  }
  fs::remove_all(dir);
  return {identical == commands.size(),
          std::to_string(identical) + "/" + std::to_string(commands.size()) + " subcommands byte-identical" +
              (mismatched.empty() ? "" : " (differs:" + mismatched + ")")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"extremal construction is exact", case1},
      {"t=3,k=2 fractional threshold", case2},
      {"t=4,k=3 fractional upper bound", case3},
      {"exact solver vs exhaustion", case4},
      {"absorption soundness", case5},
      {"near-perfect matching n=60", case6},
      {"perfect factor pipeline n=60", case7},
      {"degree-preserving equipartition", case8},
      {"nibble coverage", case9},
      {"determinism", case10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

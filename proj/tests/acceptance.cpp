// One PASS/FAIL line per acceptance criterion; exit status is non-zero if any fail.
#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "shn/binary_nets.hpp"
#include "shn/complex.hpp"
#include "shn/continuous_net.hpp"
#include "shn/harness.hpp"
#include "shn/homology.hpp"
#include "shn/io.hpp"
#include "shn/theory.hpp"

using namespace shn;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    v.pass = false;
    v.detail += " [over time budget]";
  }
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double mean_for(const RunResult& r, const std::string& cond, std::size_t p, const std::string& measure = "") {
  for (const auto& s : r.summary) {
    if (s.condition == cond && s.P == p && (measure.empty() || s.measure == measure)) return s.mean;
  }
  throw std::runtime_error("no summary for " + cond + " P=" + std::to_string(p) + " " + measure);
}

double laplace_det(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  double det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0.0) continue;
    std::vector<std::vector<double>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(a[r][c]);
      }
      minor.push_back(std::move(row));
    }
    det += ((j % 2) ? -1.0 : 1.0) * a[0][j] * laplace_det(minor);
  }
  return det;
}

Verdict golden_example() {
  const auto cx = hebbian_weights(build_k_skeleton(6, 3), testing::worked_example_patterns());
  const double w13 = *cx.weight(Simplex{0, 2});
  const double w356 = *cx.weight(Simplex{2, 4, 5});
  const double w2456 = *cx.weight(Simplex{1, 3, 4, 5});
  const bool ok = std::abs(w13 - 1.0 / 6) <= 1e-12 && std::abs(w356 + 1.0 / 6) <= 1e-12 &&
                  std::abs(w2456 + 0.5) <= 1e-12 && connections_count(6, 3) == 50 && cx.size() == 50;
  return {ok, "w13=" + fmt(w13) + " w356=" + fmt(w356) + " w2456=" + fmt(w2456) +
                  " connections=" + connections_count(6, 3).get_str()};
}

Verdict euler_table() {
  const std::vector<std::pair<Condition, long long>> targets = {{Condition::K1, -4850},
                                                                {Condition::R1b2, -2375},
                                                                {Condition::R1b2b, 100},
                                                                {Condition::R12b, 2575},
                                                                {Condition::R2, 5050}};
  bool ok = true;
  std::string detail;
  for (const auto& [c, target] : targets) {
    const long long chi = functional_euler_characteristic(sample_diluted(100, dilution_spec(c, 100), 1));
    ok = ok && std::llabs(chi - target) <= 1;
    detail += std::string(to_string(c)) + "=" + std::to_string(chi) + " ";
  }
  return {ok, detail};
}

Verdict homology_suite() {
  auto betti = [](std::size_t n, std::vector<Simplex> top, int d) { return betti_numbers(downward_closure(n, top), d).betti; };
  const bool hollow = betti(3, {Simplex{0, 1}, Simplex{1, 2}, Simplex{0, 2}}, 1) == std::vector<std::size_t>{1, 1};
  const bool filled = betti(3, {Simplex{0, 1, 2}}, 2) == std::vector<std::size_t>{1, 0, 0};
  const bool sphere = betti(4, {Simplex{0, 1, 2}, Simplex{0, 1, 3}, Simplex{0, 2, 3}, Simplex{1, 2, 3}}, 2) ==
                      std::vector<std::size_t>{1, 0, 1};

  std::mt19937_64 rng(7);
  int d2_fail = 0, euler_fail = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng() % 9;
    std::vector<Simplex> gens;
    const std::size_t tops = 1 + rng() % 8;
    for (std::size_t t = 0; t < tops; ++t) {
      std::vector<Vertex> vs(n);
      std::iota(vs.begin(), vs.end(), 0);
      std::shuffle(vs.begin(), vs.end(), rng);
      vs.resize(1 + rng() % std::min<std::size_t>(n, 5));
      gens.push_back(Simplex::from_unsorted(vs));
    }
    const auto c = downward_closure(n, gens);
    for (int k = 1; k < c.dimension(); ++k) {
      const auto a = boundary_matrix(c, k).dense();
      const auto b = boundary_matrix(c, k + 1).dense();
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < (b.empty() ? 0 : b[0].size()); ++j) {
          long long s = 0;
          for (std::size_t m = 0; m < b.size(); ++m) s += static_cast<long long>(a[i][m]) * b[m][j];
          if (s != 0) ++d2_fail;
        }
      }
    }
    if (betti_numbers(c).euler_characteristic() != c.euler_characteristic()) ++euler_fail;
  }
  const bool ok = hollow && filled && sphere && d2_fail == 0 && euler_fail == 0;
  return {ok, std::string("hollow ") + (hollow ? "ok" : "bad") + ", filled " + (filled ? "ok" : "bad") +
                  ", sphere " + (sphere ? "ok" : "bad") + ", d^2 violations " + std::to_string(d2_fail) +
                  ", Euler mismatches " + std::to_string(euler_fail) + " over 200 complexes"};
}

Verdict energy_descent() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int increases = 0;
  long long moves = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rng() % 11;
    const auto full = build_k_skeleton(n, static_cast<int>(std::min<std::size_t>(n - 1, 3)));
    std::vector<Simplex> keep;
    std::vector<double> w;
    for (const auto& s : full.simplices()) {
      if (rng() % 2) continue;
      keep.push_back(s);
      w.push_back(u(rng));
    }
    if (keep.empty()) continue;
    const FunctionalComplex c(n, keep, w);
    BinaryState s{Spins(n)};
    for (auto& x : s.spins) x = (rng() & 1) ? 1 : -1;
    auto exact = [&](const BinaryState& st) {
      mpq_class e = 0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        int prod = 1;
        for (auto v : c.simplex(k).vertices()) prod *= st.spins[v];
        e -= mpq_class(c.weight_at(k)) * prod;
      }
      return e;
    };
    for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
      const auto before = exact(s);
      s = traditional_update_async(s, c, rng() % n);
      if (exact(s) > before) ++increases;
      ++moves;
    }
  }
  return {increases == 0, std::to_string(increases) + " increases in " + std::to_string(moves) + " async updates"};
}

RunResult binary_run(std::vector<std::string> conds, std::vector<std::size_t> loadings, std::size_t trials,
                     std::uint64_t seed) {
  return run_binary_overlap(RunConfig::from_json(json{{"experiment", "binary_overlap"},
                                                      {"n", 100},
                                                      {"conditions", conds},
                                                      {"loadings", loadings},
                                                      {"trials", trials},
                                                      {"dynamics", "traditional"},
                                                      {"seed", seed}}));
}

Verdict table2() {
  const auto r = binary_run({"K1", "R1[2]"}, {5, 30}, 25, 2023);
  const double k5 = mean_for(r, "K1", 5), r5 = mean_for(r, "R1[2]", 5);
  const double k30 = mean_for(r, "K1", 30), r30 = mean_for(r, "R1[2]", 30);
  const bool a = k5 >= 0.75 && k5 <= 0.99, b = r5 >= 0.99, c = r30 - k30 >= 0.15;
  return {a && b && c, std::string("(a) K1@5=") + fmt(k5) + (a ? " ok" : " bad") + "; (b) R1[2]@5=" + fmt(r5) +
                           (b ? " ok" : " bad") + "; (c) R1[2]@30-K1@30=" + fmt(r30) + "-" + fmt(k30) + "=" +
                           fmt(r30 - k30) + (c ? " ok" : " bad")};
}

Verdict table7() {
  const auto r = binary_run({"R[123]"}, {20}, 15, 2023);
  const double m = mean_for(r, "R[123]", 20);
  return {m >= 0.95, "R[123]@P=20 mean overlap " + fmt(m)};
}

Verdict distance_oracles() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 16;
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> xi(n), st(n);
    for (auto& x : xi) x = u(rng);
    for (auto& x : st) x = u(rng);
    std::vector<Vertex> vs(n);
    std::iota(vs.begin(), vs.end(), 0);
    std::shuffle(vs.begin(), vs.end(), rng);
    vs.resize(2 + rng() % 4);
    const auto s = Simplex::from_unsorted(vs);
    for (auto base : {DistanceBase::Euclidean, DistanceBase::Manhattan}) {
      double sum = 0.0;
      for (const auto& e : enumerate_faces(s, 1)) sum += std::pow(pairwise_distance(e, xi, st, base), 2);
      worst = std::max(worst, std::abs(ced(s, xi, st, base) - std::sqrt(sum)));
      const std::size_t m = s.size();
      std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 1.0));
      a[0][0] = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          a[i + 1][j + 1] = i == j ? 0.0 : std::pow(pairwise_distance(Simplex::from_unsorted({s[i], s[j]}), xi, st, base), 2);
        }
      }
      worst = std::max(worst, std::abs(cmd(s, xi, st, base) - std::abs(laplace_det(a))));
    }
  }
  const std::vector<double> tri{0, 9, 16, 9, 0, 25, 16, 25, 0};
  const double det345 = std::abs(cayley_menger_determinant(tri, 3));
  const double via_cmd = cmd(Simplex{0, 1, 2}, std::vector<double>{0, 3, 4}, std::vector<double>{0, 0, 0},
                             DistanceBase::Euclidean);
  const bool ok = worst <= 1e-9 && std::abs(det345 - 576.0) < 1e-9 && std::abs(via_cmd - 576.0) < 1e-9;
  return {ok, "max deviation " + fmt(worst) + " over 500 simplices x 2 bases; 3-4-5 cmd=" + fmt(det345)};
}

Verdict continuous_retrieval() {
  const auto base = json{{"experiment", "continuous_recall"},
                         {"n", 256},
                         {"conditions", {"K1", "R1[2]"}},
                         {"measures", {"euclidean", "manhattan", "ced", "cmd"}},
                         {"patterns", "hadamard"},
                         {"noise_variance", 0.5},
                         {"inv_t", 100.0},
                         {"trials", 2},
                         {"queries_per_trial", 10},
                         {"seed", 2023}};
  auto low = base;
  low["loadings"] = {20};
  const auto r = run_continuous_recall(RunConfig::from_json(low));
  const double ke = mean_for(r, "K1", 20, "EuclideanDist"), km = mean_for(r, "K1", 20, "ManhattanDist");
  const double rc = mean_for(r, "R1[2]", 20, "Ced"), rm = mean_for(r, "R1[2]", 20, "Cmd");
  const bool point = ke == 1.0 && km == 1.0 && rc >= 0.95 && rm >= 0.95;

  auto curve = base;
  curve["loadings"] = {10, 50, 100};
  curve["queries_per_trial"] = 5;
  const auto c = run_continuous_recall(RunConfig::from_json(curve));
  bool monotone = true;
  std::string shape;
  std::map<std::string, std::vector<double>> by_series;
  for (const auto& s : c.summary) by_series[s.condition + "/" + s.measure].push_back(s.mean);
  for (const auto& [name, v] : by_series) {
    for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i] <= v[i - 1];
    shape += " " + name + "=" + fmt(v[0]) + "/" + fmt(v[1]) + "/" + fmt(v[2]);
  }
  return {point && monotone, "P=20: K1 Euclidean " + fmt(ke) + ", K1 Manhattan " + fmt(km) + ", R1[2] ced " +
                                 fmt(rc) + ", R1[2] cmd " + fmt(rm) + "; loading curve " +
                                 (monotone ? "monotone" : "NOT monotone") + ":" + shape};
}

Verdict homology_correlation() {
  const auto r = run_homology_correlation(RunConfig::from_json(json{{"experiment", "homology_correlation"},
                                                                    {"n", 100},
                                                                    {"conditions", {"R[12]"}},
                                                                    {"loadings", {10}},
                                                                    {"trials", 50},
                                                                    {"seed", 2023}}));
  const auto& s = r.summary.at(0);
  if (!s.pearson_r) return {false, "Pearson r undefined (zero variance)"};
  return {std::abs(*s.pearson_r) < 0.35, "R[12] P=10 r(overlap, beta1)=" + fmt(*s.pearson_r)};
}

Verdict capacity() {
  const double with = capacity_mixed({100, 1, true});
  const double oracle = 100.0 / (2.0 * std::log(100.0));
  const double without = capacity_mixed({100, 1, false});
  bool counts = true;
  for (std::size_t n = 2; n <= 12; ++n) {
    for (int d = 1; d < static_cast<int>(n); ++d) {
      // enumerate subsets of size 2..d+1 by bitmask
      unsigned long enumerated = 0;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const int pc = __builtin_popcount(mask);
        if (pc >= 2 && pc <= d + 1) ++enumerated;
      }
      counts = counts && connections_count(n, d) == enumerated;
    }
  }
  const bool ok = std::abs(with - oracle) < 1e-9 && without == with / 2.0 && counts;
  return {ok, "capacity(100,1)=" + fmt(with) + " oracle " + fmt(oracle) + ", no-errors " + fmt(without) +
                  ", counts " + (counts ? "match" : "differ") + " for N<=12"};
}

Verdict determinism() {
  const auto root = fs::temp_directory_path() / "shn_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<json> configs = {
      json{{"experiment", "binary_overlap"}, {"n", 60}, {"conditions", {"K1", "R1[2]"}}, {"loadings", {3, 6}},
           {"trials", 4}, {"seed", 42}},
      json{{"experiment", "continuous_recall"}, {"n", 64}, {"conditions", {"K1", "R1[2]"}},
           {"measures", {"euclidean", "cmd"}}, {"loadings", {8}}, {"trials", 2}, {"queries_per_trial", 3},
           {"seed", 42}},
      json{{"experiment", "homology_correlation"}, {"n", 30}, {"conditions", {"R[12]"}}, {"loadings", {3}},
           {"trials", 5}, {"seed", 42}}};
  int identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::string bytes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto cfg = RunConfig::from_json(configs[i]);
      const auto dir = root / (std::to_string(i) + "_" + std::to_string(rep));
      emit_outputs(run_experiment(cfg), cfg, dir);
      bytes[rep] = read_text_file(dir / "rows.csv");
    }
    if (!bytes[0].empty() && bytes[0] == bytes[1]) ++identical;
  }
  return {identical == static_cast<int>(configs.size()),
          std::to_string(identical) + "/" + std::to_string(configs.size()) + " experiments byte-identical"};
}

}  // namespace

int main() {
  criterion(1, "golden worked example", 1, golden_example);
  criterion(2, "functional Euler characteristics", 1, euler_table);
  criterion(3, "homology suite", 30, homology_suite);
  criterion(4, "asynchronous energy descent", 60, energy_descent);
  criterion(5, "binary overlap table, desk scale", 600, table2);
  criterion(6, "equal-thirds spot check", 600, table7);
  criterion(7, "ced/cmd distance oracles", 10, distance_oracles);
  criterion(8, "continuous retrieval", 900, continuous_retrieval);
  criterion(9, "homology correlation", 900, homology_correlation);
  criterion(10, "capacity evaluators", 1, capacity);
  criterion(11, "determinism", 600, determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

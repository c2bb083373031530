#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "shn/complex.hpp"
#include "shn/continuous_net.hpp"

using namespace shn;

namespace {

// Cofactor expansion along the first row.
double laplace_det(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  double det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0.0) continue;
    std::vector<std::vector<double>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(a[r][c]);
      }
      minor.push_back(row);
    }
    det += ((j % 2) ? -1.0 : 1.0) * a[0][j] * laplace_det(minor);
  }
  return det;
}

double brute_ced(const Simplex& s, const std::vector<double>& xi, const std::vector<double>& st, DistanceBase b) {
  double total = 0.0;
  for (const auto& e : enumerate_faces(s, 1)) {
    const double d = pairwise_distance(e, xi, st, b);
    total += d * d;
  }
  return std::sqrt(total);
}

double brute_cmd(const Simplex& s, const std::vector<double>& xi, const std::vector<double>& st, DistanceBase b) {
  const std::size_t m = s.size();
  std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 1.0));
  a[0][0] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double d = 0.0;
      if (i != j) d = pairwise_distance(Simplex::from_unsorted({s[i], s[j]}), xi, st, b);
      a[i + 1][j + 1] = d * d;
    }
  }
  return std::abs(laplace_det(a));
}

PatternSet uniform_set(std::size_t p, std::size_t n, std::uint64_t seed) { return random_uniform_patterns(p, n, seed); }

}  // namespace

TEST_CASE("pairwise distance on a 3-4 offset") {
  const std::vector<double> xi{3.0, 4.0, 0.0};
  const std::vector<double> st{0.0, 0.0, 0.0};
  CHECK(pairwise_distance(Simplex{0, 1}, xi, st, DistanceBase::Euclidean) == doctest::Approx(5.0));
  CHECK(pairwise_distance(Simplex{0, 1}, xi, st, DistanceBase::Manhattan) == doctest::Approx(7.0));
  CHECK_THROWS(pairwise_distance(Simplex{0, 1, 2}, xi, st, DistanceBase::Euclidean));
}

TEST_CASE("Cayley-Menger of the 3-4-5 triangle is 576") {
  // squared edge lengths 9, 16, 25
  const std::vector<double> d{0, 9, 16, 9, 0, 25, 16, 25, 0};
  CHECK(std::abs(cayley_menger_determinant(d, 3)) == doctest::Approx(576.0).epsilon(1e-12));
  // per-vertex offsets (0, 3, 4) give exactly those edges
  const std::vector<double> xi{0.0, 3.0, 4.0};
  const std::vector<double> st{0.0, 0.0, 0.0};
  CHECK(cmd(Simplex{0, 1, 2}, xi, st, DistanceBase::Euclidean) == doctest::Approx(576.0).epsilon(1e-12));
  // unit right triangle: 16 * area^2 = 4 * (1/2)^2 * 4
  const std::vector<double> unit{0, 1, 1, 1, 0, 2, 1, 2, 0};
  CHECK(std::abs(cayley_menger_determinant(unit, 3)) == doctest::Approx(4.0));
}

TEST_CASE("ced and cmd match brute force on 500 random simplices") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 12;
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> xi(n), st(n);
    for (auto& x : xi) x = u(rng);
    for (auto& x : st) x = u(rng) * 2.0 - 0.5;
    const std::size_t k = 2 + rng() % 4;  // dimension 1..4
    std::vector<Vertex> vs(n);
    std::iota(vs.begin(), vs.end(), 0);
    std::shuffle(vs.begin(), vs.end(), rng);
    vs.resize(k);
    const auto s = Simplex::from_unsorted(vs);
    for (auto b : {DistanceBase::Euclidean, DistanceBase::Manhattan}) {
      CHECK(ced(s, xi, st, b) == doctest::Approx(brute_ced(s, xi, st, b)).epsilon(1e-9));
      const double oracle = brute_cmd(s, xi, st, b);
      CHECK(std::abs(cmd(s, xi, st, b) - oracle) <= 1e-9 * std::max(1.0, oracle));
    }
  }
}

TEST_CASE("distance functions reject vertices") {
  const std::vector<double> xi{0.0}, st{0.0};
  CHECK_THROWS(ced(Simplex{0}, xi, st, DistanceBase::Euclidean));
  CHECK_THROWS(cmd(Simplex{0}, xi, st, DistanceBase::Euclidean));
}

TEST_CASE("lse and energy match direct evaluation") {
  const auto patterns = uniform_set(3, 5, 1);
  const auto c = build_k_skeleton(5, 2);
  const std::vector<double> s{0.2, 0.9, 0.4, 0.1, 0.6};
  for (double beta : {0.5, 2.0, 50.0}) {
    double sum = 0.0;
    for (std::size_t mu = 0; mu < 3; ++mu) {
      for (const auto& sx : c.simplices()) {
        double prod = 1.0;
        for (auto v : sx.vertices()) prod *= patterns(mu, v) * s[v];
        sum += std::exp(beta * prod);
      }
    }
    const double expect = std::log(sum) / beta;
    CHECK(lse(beta, patterns, s, c) == doctest::Approx(expect).epsilon(1e-12));
    const double sq = std::inner_product(s.begin(), s.end(), s.begin(), 0.0);
    CHECK(continuous_energy(s, patterns, c, beta) == doctest::Approx(-expect + 0.5 * sq).epsilon(1e-12));
  }
  CHECK_THROWS(lse(0.0, patterns, s, c));
  CHECK_THROWS(lse(1.0, patterns, s, FunctionalComplex(5, {})));
  // stable at huge beta
  CHECK(std::isfinite(lse(1e6, patterns, s, c)));
}

TEST_CASE("similarity vectors are normalised") {
  const auto patterns = uniform_set(6, 16, 3);
  const auto c = sample_diluted(16, dilution_spec(Condition::R12b, 16), 4);
  const auto s = random_uniform_patterns(1, 16, 5);
  for (const auto& m : {SimilarityMeasure::dot(), SimilarityMeasure::euclidean(), SimilarityMeasure::manhattan(),
                        SimilarityMeasure::ced(), SimilarityMeasure::cmd(),
                        SimilarityMeasure::ced(DistanceBase::Manhattan),
                        SimilarityMeasure::cmd(DistanceBase::Manhattan)}) {
    const auto v = similarity_vector(s.row(0), patterns, c, m);
    REQUIRE(v.size() == 6);
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("distance scores favour the nearest pattern; zero distance takes all mass") {
  const PatternSet p(3, 4, {0, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1}, PatternKind::Continuous);
  const auto c = build_k_skeleton(4, 1);
  const std::vector<double> near0{0.1, 0.0, 0.1, 0.0};
  const auto v = similarity_vector(near0, p, c, SimilarityMeasure::euclidean());
  CHECK(v[0] > v[1]);
  CHECK(v[0] > v[2]);
  const std::vector<double> exact{1, 1, 1, 1};
  const auto w = similarity_vector(exact, p, c, SimilarityMeasure::manhattan());
  CHECK(w == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("similarity input validation") {
  const auto binary = random_binary_patterns(2, 4, 1);
  const auto c = build_k_skeleton(4, 1);
  const std::vector<double> s(4, 0.5);
  CHECK_THROWS(similarity_vector(s, binary, c, SimilarityMeasure::euclidean()));
  const auto cont = uniform_set(2, 4, 1);
  const std::vector<double> short_state(3, 0.5);
  CHECK_THROWS(similarity_vector(short_state, cont, c, SimilarityMeasure::euclidean()));
}

TEST_CASE("measure names round trip") {
  for (const auto& m : {SimilarityMeasure::dot(), SimilarityMeasure::euclidean(), SimilarityMeasure::manhattan(),
                        SimilarityMeasure::ced(), SimilarityMeasure::cmd(),
                        SimilarityMeasure::ced(DistanceBase::Manhattan),
                        SimilarityMeasure::cmd(DistanceBase::Manhattan)}) {
    CHECK(SimilarityMeasure::parse(m.name()) == m);
  }
  CHECK(SimilarityMeasure::parse("CMD-manhattan") == SimilarityMeasure::cmd(DistanceBase::Manhattan));
  CHECK_THROWS(SimilarityMeasure::parse("cosine"));
}

TEST_CASE("softmax") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const auto y = softmax(x, 1.0);
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(y[2] == doctest::Approx(std::exp(3.0) / z));
  const auto big = softmax(x, 1e4);
  CHECK(big[2] == doctest::Approx(1.0));
  CHECK(std::isfinite(big[0]));
  CHECK(softmax(std::vector<double>{}, 1.0).empty());
}

TEST_CASE("update stays in the convex hull of the patterns") {
  const auto patterns = uniform_set(5, 10, 7);
  const auto c = sample_diluted(10, dilution_spec(Condition::R1b2b, 10), 1);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.5, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> s(10);
    for (auto& x : s) x = g(rng);
    const auto out = continuous_update(s, patterns, c, SimilarityMeasure::cmd(), 10.0);
    const auto w = softmax(similarity_vector(s, patterns, c, SimilarityMeasure::cmd()), 10.0);
    for (std::size_t i = 0; i < 10; ++i) {
      double lo = 1.0, hi = 0.0, mix = 0.0;
      for (std::size_t mu = 0; mu < 5; ++mu) {
        lo = std::min(lo, patterns(mu, i));
        hi = std::max(hi, patterns(mu, i));
        mix += w[mu] * patterns(mu, i);
      }
      CHECK(out[i] >= lo - 1e-12);
      CHECK(out[i] <= hi + 1e-12);
      CHECK(out[i] == doctest::Approx(mix));
    }
  }
}

TEST_CASE("settle") {
  const auto patterns = random_binary01_patterns(4, 32, 2);
  const auto c = build_k_skeleton(32, 1);
  // a stored pattern takes all the score mass; softmax leaves only e^-100 leakage
  const auto out = settle(patterns.row(1), patterns, c, SimilarityMeasure::euclidean(), 100.0);
  CHECK(out.converged);
  CHECK(out.steps <= 2);
  for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(out.state[i] - patterns(1, i)) < 1e-12);
  // max-step cap is honoured
  std::vector<double> s(32, 0.5);
  const auto capped = settle(s, patterns, c, SimilarityMeasure::euclidean(), 1.0, 0.0, 3);
  CHECK(capped.steps == 3);
  CHECK_FALSE(capped.converged);
}

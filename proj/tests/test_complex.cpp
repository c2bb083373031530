#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "shn/complex.hpp"
#include "shn/simplex.hpp"

using namespace shn;

TEST_CASE("simplex construction and ordering") {
  CHECK(Simplex{0, 2, 5}.dimension() == 2);
  CHECK_THROWS_AS(Simplex({2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Simplex({1, 1}), std::invalid_argument);
  CHECK(Simplex::from_unsorted({5, 0, 2}) == Simplex{0, 2, 5});
  CHECK_THROWS_AS(Simplex::from_unsorted({3, 3}), std::invalid_argument);
  // dimension first, then lexicographic
  CHECK(Simplex{5, 9} < Simplex{0, 1, 2});
  CHECK(Simplex{0, 3} < Simplex{1, 2});
  CHECK(Simplex{0, 1, 4}.without_position(1) == Simplex{0, 4});
}

TEST_CASE("enumerate_faces counts and order") {
  const Simplex s{0, 1, 2, 3};
  CHECK(enumerate_faces(s, 0).size() == 4);
  const auto edges = enumerate_faces(s, 1);
  CHECK(edges.size() == 6);
  CHECK(std::is_sorted(edges.begin(), edges.end()));
  CHECK(edges.front() == Simplex{0, 1});
  CHECK(edges.back() == Simplex{2, 3});
  CHECK(enumerate_faces(s, 3) == std::vector<Simplex>{s});
  CHECK_THROWS_AS(enumerate_faces(s, 4), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_faces(s, -1), std::invalid_argument);
}

TEST_CASE("functional complex validation and canonical order") {
  FunctionalComplex c(4, {Simplex{1, 2, 3}, Simplex{0, 3}, Simplex{0, 1}}, {0.5, 0.25, 0.125});
  REQUIRE(c.size() == 3);
  CHECK(c.simplex(0) == Simplex{0, 1});
  CHECK(c.weight_at(0) == 0.125);
  CHECK(c.weight(Simplex{1, 2, 3}).value() == 0.5);
  CHECK_FALSE(c.weight(Simplex{1, 2}).has_value());
  CHECK(c.max_dimension() == 2);
  CHECK_THROWS_AS(FunctionalComplex(4, {Simplex{0, 1}, Simplex{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FunctionalComplex(4, {Simplex{2}}), std::invalid_argument);
  CHECK_THROWS_AS(FunctionalComplex(4, {Simplex{0, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(FunctionalComplex(4, {Simplex{0, 1}}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("k-skeleton sizes match binomial sums") {
  for (std::size_t n = 2; n <= 9; ++n) {
    for (int k = 1; k < static_cast<int>(n); ++k) {
      std::uint64_t expect = 0;
      for (int d = 1; d <= k; ++d) expect += binomial(n, static_cast<std::uint64_t>(d) + 1);
      CHECK(build_k_skeleton(n, k).size() == expect);
    }
  }
  CHECK_THROWS_AS(build_k_skeleton(5, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_k_skeleton(5, 0), std::invalid_argument);
}

TEST_CASE("binomial and colex unranking") {
  CHECK(binomial(100, 2) == 4950);
  CHECK(binomial(6, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  // unranking enumerates every k-subset exactly once, in colex order
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::size_t n = 8;
    std::set<Simplex> seen;
    Simplex prev;
    for (std::uint64_t r = 0; r < binomial(n, k); ++r) {
      const auto s = unrank_colex(r, k, n);
      CHECK(s.size() == k);
      CHECK(s.max_vertex() < n);
      if (r > 0) {
        // colex: compare reversed vertex lists
        std::vector<Vertex> a(prev.vertices().rbegin(), prev.vertices().rend());
        std::vector<Vertex> b(s.vertices().rbegin(), s.vertices().rend());
        CHECK(a < b);
      }
      seen.insert(s);
      prev = s;
    }
    CHECK(seen.size() == binomial(n, k));
  }
}

TEST_CASE("dilution counts follow the rounding rule") {
  const auto c = dilution_counts(dilution_spec(Condition::R1b2, 100));
  CHECK(c.at(1) == 3713);  // round(0.75 * 4950) = 3712.5 -> 3713
  CHECK(c.at(2) == 1237);  // remainder on the top dimension
  const auto thirds = dilution_counts(dilution_spec(Condition::R123bbb, 100));
  CHECK(thirds.at(1) + thirds.at(2) + thirds.at(3) == 4950);
  for (auto cond : all_conditions()) {
    std::uint64_t total = 0;
    for (const auto& [d, n] : dilution_counts(dilution_spec(cond, 30))) total += n;
    CHECK(total == binomial(30, 2));
  }
}

TEST_CASE("condition names round trip") {
  for (auto c : all_conditions()) CHECK(parse_condition(to_string(c)) == c);
  CHECK(parse_condition("r1[2]") == Condition::R12b);
  CHECK_THROWS_AS(parse_condition("R9"), std::invalid_argument);
}

TEST_CASE("sample_diluted: exact counts, distinct simplices, deterministic") {
  const auto a = sample_diluted(40, dilution_spec(Condition::R1b2b, 40), 7);
  const auto b = sample_diluted(40, dilution_spec(Condition::R1b2b, 40), 7);
  const auto c = sample_diluted(40, dilution_spec(Condition::R1b2b, 40), 8);
  CHECK(a.simplices().size() == binomial(40, 2));
  const auto counts = a.counts_by_dimension();
  CHECK(counts[1] == 390);
  CHECK(counts[2] == 390);
  CHECK(std::equal(a.simplices().begin(), a.simplices().end(), b.simplices().begin(), b.simplices().end()));
  CHECK_FALSE(std::equal(a.simplices().begin(), a.simplices().end(), c.simplices().begin(), c.simplices().end()));
}

TEST_CASE("sample_diluted is roughly uniform over vertices") {
  // each vertex appears in a triangle with probability 3/N
  std::vector<double> hits(20, 0.0);
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    const auto cx = sample_diluted(20, dilution_spec(Condition::R2, 20), static_cast<std::uint64_t>(r));
    for (const auto& s : cx.simplices()) {
      for (auto v : s.vertices()) hits[v] += 1.0;
    }
  }
  const double expect = reps * 190.0 * 3.0 / 20.0;
  for (double h : hits) CHECK(std::abs(h - expect) / expect < 0.05);
}

TEST_CASE("functional Euler characteristic matches the table") {
  const std::vector<std::pair<Condition, long long>> targets = {
      {Condition::K1, -4850}, {Condition::R1b2, -2375}, {Condition::R1b2b, 100}, {Condition::R12b, 2575},
      {Condition::R2, 5050}};
  for (const auto& [c, chi] : targets) {
    const auto cx = sample_diluted(100, dilution_spec(c, 100), 1);
    CHECK(std::llabs(functional_euler_characteristic(cx) - chi) <= 1);
  }
}

TEST_CASE("Hebbian weights on the worked example") {
  const auto patterns = testing::worked_example_patterns();
  const auto cx = hebbian_weights(build_k_skeleton(6, 3), patterns);
  CHECK(cx.size() == 50);
  // all three patterns agree on vertices 0 and 2, so this edge sums to 3/6
  CHECK(cx.weight(Simplex{0, 2}).value() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cx.weight(Simplex{2, 4, 5}).value() == doctest::Approx(-1.0 / 6).epsilon(1e-12));
  CHECK(cx.weight(Simplex{1, 3, 4, 5}).value() == doctest::Approx(-0.5).epsilon(1e-12));
  // independent oracle for every simplex
  for (std::size_t k = 0; k < cx.size(); ++k) {
    int sum = 0;
    for (std::size_t mu = 0; mu < 3; ++mu) {
      int prod = 1;
      for (auto v : cx.simplex(k).vertices()) prod *= static_cast<int>(patterns(mu, v));
      sum += prod;
    }
    CHECK(cx.weight_at(k) == doctest::Approx(sum / 6.0).epsilon(1e-15));
  }
}

TEST_CASE("Hebbian weights reject continuous patterns and width mismatch") {
  const PatternSet cont(1, 3, {0.1, 0.2, 0.3}, PatternKind::Continuous);
  CHECK_THROWS(hebbian_weights(build_k_skeleton(3, 1), cont));
  const PatternSet wrong(1, 4, {1, 1, 1, 1}, PatternKind::Binary);
  CHECK_THROWS(hebbian_weights(build_k_skeleton(3, 1), wrong));
}

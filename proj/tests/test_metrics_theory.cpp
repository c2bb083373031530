#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "shn/binary_nets.hpp"
#include "shn/complex.hpp"
#include "shn/metrics.hpp"
#include "shn/theory.hpp"

using namespace shn;

TEST_CASE("overlap and mse") {
  const std::vector<double> a{1, -1, 1, -1};
  const std::vector<double> b{1, -1, -1, 1};
  const std::vector<double> neg{-1, 1, -1, 1};
  CHECK(overlap(a, a) == 1.0);
  CHECK(overlap(a, neg) == 1.0);
  CHECK(overlap(a, b) == 0.0);
  CHECK(overlap(BinaryState::from_values(a), b) == 0.0);
  CHECK(mse(a, b) == doctest::Approx(2.0));
  CHECK_THROWS_AS(overlap(a, std::vector<double>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("correct_recall uses a summed squared error") {
  const std::vector<double> xi(100, 0.0);
  std::vector<double> s(100, 0.7);  // SSE 49
  CHECK(correct_recall(s, xi));
  s.assign(100, 0.71);  // SSE 50.41
  CHECK_FALSE(correct_recall(s, xi));
  CHECK(correct_recall(s, xi, 60.0));
}

TEST_CASE("score_overlap and score_mse pick the best with lowest-index ties") {
  const auto p = testing::worked_example_patterns();
  const auto s = BinaryState::from_values(p.row(2));
  const auto r = score_overlap(s, p);
  CHECK(r.best_index == 2);
  CHECK(r.best_value == 1.0);
  const PatternSet dup(2, 3, {1, 1, 1, 1, 1, 1}, PatternKind::Binary);
  CHECK(score_overlap(BinaryState{Spins{1, 1, 1}}, dup).best_index == 0);

  const PatternSet c(3, 2, {0, 0, 1, 1, 0.5, 0.5}, PatternKind::Continuous);
  const std::vector<double> q{0.9, 0.8};
  const auto m = score_mse(q, c);
  CHECK(m.best_index == 1);
  CHECK(m.best_value == doctest::Approx(0.025));
}

TEST_CASE("summarize") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.n == 4);
  CHECK(summarize(std::vector<double>{7}).sd == 0.0);
  CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("capacity evaluators") {
  const double with_errors = capacity_mixed({100, 1, true});
  CHECK(std::abs(with_errors - 100.0 / (2.0 * std::log(100.0))) < 1e-9);
  CHECK(capacity_mixed({100, 1, false}) == with_errors / 2.0);
  CHECK(capacity_mixed({10, 2, true}) == doctest::Approx(110.0 / (2.0 * std::log(10.0))));
  CHECK_THROWS(capacity_mixed({1, 1, true}));
  CHECK_THROWS(capacity_mixed({10, 0, true}));
  CHECK(diluted_capacity_order(0.5, 100, 2) == doctest::Approx(50.0));
  CHECK(noise_sigma(100, 25, 1) == doctest::Approx(0.5));
  CHECK(noise_total(100, 100, 2) == doctest::Approx(1.0 + 0.1));
  CHECK(z_total(10, 10, 2) == doctest::Approx(1.1));
  const double p = prob_stable_pattern(100, 1, 1);
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
  CHECK(prob_stable_pattern(100, 1000, 1) == 0.0);
}

TEST_CASE("connections_count matches enumeration") {
  CHECK(connections_count(6, 3) == 50);
  for (std::size_t n = 2; n <= 12; ++n) {
    for (int d = 1; d < static_cast<int>(n); ++d) {
      CHECK(connections_count(n, d) == build_k_skeleton(n, d).size());
    }
  }
  CHECK(connections_count(1000, 3).get_str() == "41583791250");
  CHECK_THROWS(connections_count(5, 5));
}

TEST_CASE("stability rates") {
  const auto p = testing::worked_example_patterns();
  CHECK(stability_rate(hebbian_weights(build_k_skeleton(6, 3), p), p) == 1.0);
  const double r = empirical_stability_rate(60, Condition::K1, 3, 5, 1);
  CHECK(r >= 0.9);
  const auto patterns = random_binary_patterns(2, 60, 4);
  const auto c = hebbian_weights(build_k_skeleton(60, 1), patterns);
  CHECK(empirical_basin_radius(c, patterns, 0, 5, 2) >= 5);
}

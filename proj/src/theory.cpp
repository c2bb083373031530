#include "shn/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "shn/binary_nets.hpp"
#include "shn/rng.hpp"

namespace shn {

namespace {

void check_np(std::size_t n, int max_degree) {
  if (n < 2) throw std::invalid_argument("N must be >= 2");
  if (max_degree < 1) throw std::invalid_argument("degree must be >= 1");
}

}  // namespace

double capacity_mixed(const CapacityQuery& q) {
  check_np(q.n, q.max_degree);
  const double n = static_cast<double>(q.n);
  double num = 0.0;
  for (int d = 1; d <= q.max_degree; ++d) num += std::pow(n, d);
  return num / ((q.tolerate_errors ? 2.0 : 4.0) * std::log(n));
}

double diluted_capacity_order(double p, std::size_t n, int d) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("connection probability must lie in (0, 1]");
  if (d < 2) throw std::invalid_argument("degree must be >= 2");
  return p * std::pow(static_cast<double>(n), d - 1);
}

double noise_sigma(std::size_t n, std::size_t p, int d) {
  check_np(n, d);
  return std::sqrt(static_cast<double>(p) / std::pow(static_cast<double>(n), d));
}

double noise_total(std::size_t n, std::size_t p, int max_degree) {
  check_np(n, max_degree);
  double v = 0.0;
  for (int d = 1; d <= max_degree; ++d) v += noise_sigma(n, p, d);
  return v;
}

double z_total(std::size_t n, std::size_t p, int max_degree) {
  check_np(n, max_degree);
  double z = 0.0;
  for (int d = 1; d <= max_degree; ++d) z += static_cast<double>(p) / std::pow(static_cast<double>(n), d);
  return z;
}

double prob_stable_pattern(std::size_t n, std::size_t p, int max_degree) {
  const double z = z_total(n, p, max_degree);
  if (z <= 0.0) return 1.0;
  const double pr = 1.0 - static_cast<double>(n) * std::sqrt(z / (2.0 * std::numbers::pi)) * std::exp(-1.0 / (2.0 * z));
  return std::clamp(pr, 0.0, 1.0);
}

mpz_class connections_count(std::size_t n, int max_degree) {
  check_np(n, max_degree);
  if (static_cast<std::size_t>(max_degree) >= n) throw std::invalid_argument("degree must be < N");
  mpz_class total = 0;
  for (int d = 2; d <= max_degree + 1; ++d) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), n, static_cast<unsigned long>(d));
    total += c;
  }
  return total;
}

double stability_rate(const FunctionalComplex& complex, const PatternSet& patterns) {
  patterns.require_kind(PatternKind::Binary, "stability rate");
  if (patterns.num_patterns() == 0) throw std::invalid_argument("no patterns");
  std::size_t fixed = 0;
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    const auto s = BinaryState::from_values(patterns.row(mu));
    if (traditional_update_sync(s, complex) == s) ++fixed;
  }
  return static_cast<double>(fixed) / static_cast<double>(patterns.num_patterns());
}

double empirical_stability_rate(std::size_t n, Condition condition, std::size_t num_patterns, std::size_t trials,
                                std::uint64_t seed) {
  if (trials == 0 || num_patterns == 0) throw std::invalid_argument("trials and pattern count must be >= 1");
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto structure = sample_diluted(n, dilution_spec(condition, n), derive_seed(seed, {1, t}));
    const auto patterns = random_binary_patterns(num_patterns, n, derive_seed(seed, {2, t}));
    total += stability_rate(hebbian_weights(structure, patterns), patterns);
  }
  return total / static_cast<double>(trials);
}

std::size_t empirical_basin_radius(const FunctionalComplex& complex, const PatternSet& patterns, std::size_t mu,
                                   std::size_t trials, std::uint64_t seed) {
  patterns.require_kind(PatternKind::Binary, "basin radius");
  if (mu >= patterns.num_patterns()) throw std::out_of_range("pattern index out of range");
  const std::size_t n = patterns.width();
  const auto target = BinaryState::from_values(patterns.row(mu));
  std::vector<std::size_t> idx(n);
  std::size_t radius = 0;
  for (std::size_t d = 1; d <= n / 2; ++d) {
    std::mt19937_64 rng(derive_seed(seed, {d}));
    for (std::size_t t = 0; t < trials; ++t) {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::shuffle(idx.begin(), idx.end(), rng);
      auto probe = target;
      for (std::size_t k = 0; k < d; ++k) probe.spins[idx[k]] = static_cast<std::int8_t>(-probe.spins[idx[k]]);
      if (!(run_to_convergence(probe, TraditionalDynamics{}, complex, patterns).final_state == target)) return radius;
    }
    radius = d;
  }
  return radius;
}

}  // namespace shn

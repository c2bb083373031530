#pragma once

#include <cstddef>
#include <cstdint>

#include <gmpxx.h>

#include "shn/complex.hpp"
#include "shn/patterns.hpp"

namespace shn {

// Asymptotic estimates evaluated verbatim at finite N.

struct CapacityQuery {
  std::size_t n = 0;
  int max_degree = 1;  // D, the skeleton dimension
  bool tolerate_errors = true;
};

/// (sum_{d=1}^D N^d) / (2 ln N) with errors tolerated, else over 4 ln N.
/// Throws std::invalid_argument for N < 2 or D < 1.
double capacity_mixed(const CapacityQuery& q);

/// p N^{d-1}: an order-of-magnitude indicator only.
double diluted_capacity_order(double p, std::size_t n, int d);

/// sqrt(P / N^d)
double noise_sigma(std::size_t n, std::size_t p, int d);
/// sum_{d=1}^D sqrt(P / N^d)
double noise_total(std::size_t n, std::size_t p, int max_degree);
/// sum_{d=1}^D P / N^d
double z_total(std::size_t n, std::size_t p, int max_degree);
/// 1 - N sqrt(z / 2 pi) exp(-1 / 2z), clamped to [0, 1].
double prob_stable_pattern(std::size_t n, std::size_t p, int max_degree);

/// sum_{d=2}^{D+1} C(N, d), exact. Requires N >= 2 and 1 <= D < N.
mpz_class connections_count(std::size_t n, int max_degree);

/// Fraction of the stored patterns left unchanged by one synchronous
/// traditional update. `complex` must already carry Hebbian weights.
double stability_rate(const FunctionalComplex& complex, const PatternSet& patterns);

/// Monte-Carlo over `trials`: each trial samples a fresh complex for the
/// condition and fresh random patterns, embeds them, and counts fixed patterns.
/// Returns the fraction of (pattern, trial) pairs that are fixed.
double empirical_stability_rate(std::size_t n, Condition condition, std::size_t num_patterns, std::size_t trials,
                                std::uint64_t seed);

/// Largest Hamming distance d such that every one of `trials` probes with d
/// random flips of pattern mu converges back to it under traditional dynamics.
/// Stops searching at the first failing d (or N/2).
std::size_t empirical_basin_radius(const FunctionalComplex& complex, const PatternSet& patterns, std::size_t mu,
                                   std::size_t trials, std::uint64_t seed);

}  // namespace shn

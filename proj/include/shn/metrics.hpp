#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shn/binary_nets.hpp"
#include "shn/patterns.hpp"

namespace shn {

/// |(1/N) sum_i S_i xi_i|. Throws std::invalid_argument on a length mismatch.
double overlap(std::span<const double> state, std::span<const double> pattern);
double overlap(const BinaryState& state, std::span<const double> pattern);

/// (1/N) sum_i (S_i - xi_i)^2
double mse(std::span<const double> state, std::span<const double> pattern);

/// sum_i (S_i - xi_i)^2 < threshold (a sum, not a mean)
inline constexpr double kRecallThreshold = 50.0;
bool correct_recall(std::span<const double> state, std::span<const double> pattern,
                    double threshold = kRecallThreshold);

struct RecallScore {
  std::vector<double> per_pattern;
  std::size_t best_index = 0;
  double best_value = 0.0;
};

/// Overlap with every pattern; best is the largest (lowest index on ties).
RecallScore score_overlap(const BinaryState& state, const PatternSet& patterns);
/// MSE against every pattern; best is the smallest (lowest index on ties).
RecallScore score_mse(std::span<const double> state, const PatternSet& patterns);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator, 0 for a single value
  std::size_t n = 0;
};

/// Throws std::invalid_argument on empty input.
Summary summarize(std::span<const double> values);

}  // namespace shn

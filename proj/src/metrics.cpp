#include "shn/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shn {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  if (a == 0) throw std::invalid_argument("empty state");
}

}  // namespace

double overlap(std::span<const double> state, std::span<const double> pattern) {
  check_lengths(state.size(), pattern.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) acc += state[i] * pattern[i];
  return std::abs(acc / static_cast<double>(state.size()));
}

double overlap(const BinaryState& state, std::span<const double> pattern) {
  check_lengths(state.size(), pattern.size());
  long long acc = 0;
  for (std::size_t i = 0; i < state.size(); ++i) acc += state.spins[i] * static_cast<long long>(pattern[i]);
  return std::abs(static_cast<double>(acc) / static_cast<double>(state.size()));
}

double mse(std::span<const double> state, std::span<const double> pattern) {
  check_lengths(state.size(), pattern.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double d = state[i] - pattern[i];
    acc += d * d;
  }
  return acc / static_cast<double>(state.size());
}

bool correct_recall(std::span<const double> state, std::span<const double> pattern, double threshold) {
  check_lengths(state.size(), pattern.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double d = state[i] - pattern[i];
    acc += d * d;
  }
  return acc < threshold;
}

RecallScore score_overlap(const BinaryState& state, const PatternSet& patterns) {
  if (patterns.num_patterns() == 0) throw std::invalid_argument("no patterns to score against");
  RecallScore r;
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    r.per_pattern.push_back(overlap(state, patterns.row(mu)));
    if (mu == 0 || r.per_pattern[mu] > r.best_value) {
      r.best_index = mu;
      r.best_value = r.per_pattern[mu];
    }
  }
  return r;
}

RecallScore score_mse(std::span<const double> state, const PatternSet& patterns) {
  if (patterns.num_patterns() == 0) throw std::invalid_argument("no patterns to score against");
  RecallScore r;
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    r.per_pattern.push_back(mse(state, patterns.row(mu)));
    if (mu == 0 || r.per_pattern[mu] < r.best_value) {
      r.best_index = mu;
      r.best_value = r.per_pattern[mu];
    }
  }
  return r;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize needs at least one value");
  Summary s;
  s.n = values.size();
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

}  // namespace shn

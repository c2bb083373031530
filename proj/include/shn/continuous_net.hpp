#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shn/complex.hpp"
#include "shn/patterns.hpp"

namespace shn {

enum class DistanceBase { Euclidean, Manhattan };

/// How a state is compared to each stored pattern, simplex by simplex.
struct SimilarityMeasure {
  enum class Kind { DotProduct, Euclidean, Manhattan, Ced, Cmd };
  Kind kind = Kind::DotProduct;
  DistanceBase base = DistanceBase::Euclidean;  // only read by Ced and Cmd

  static SimilarityMeasure dot() { return {Kind::DotProduct}; }
  static SimilarityMeasure euclidean() { return {Kind::Euclidean}; }
  static SimilarityMeasure manhattan() { return {Kind::Manhattan}; }
  static SimilarityMeasure ced(DistanceBase b = DistanceBase::Euclidean) { return {Kind::Ced, b}; }
  static SimilarityMeasure cmd(DistanceBase b = DistanceBase::Euclidean) { return {Kind::Cmd, b}; }

  /// Accepts the variant names (DotProduct, EuclideanDist, ManhattanDist, Ced, Cmd,
  /// Ced(Manhattan), Cmd(Manhattan)) and short aliases (dot, euclidean, manhattan,
  /// ced, cmd, ced-manhattan, cmd-manhattan), case-insensitive.
  static SimilarityMeasure parse(std::string_view name);
  std::string name() const;
  bool is_distance() const noexcept { return kind != Kind::DotProduct; }

  friend bool operator==(const SimilarityMeasure&, const SimilarityMeasure&) = default;
};

/// T log sum_mu sum_s exp(beta * prod_{i in s} xi_i^mu S_i), with T = 1/beta.
/// Throws std::invalid_argument for beta <= 0 or an empty complex.
double lse(double inv_t, const PatternSet& patterns, std::span<const double> state, const FunctionalComplex& complex);

/// -lse + |S|^2 / 2
double continuous_energy(std::span<const double> state, const PatternSet& patterns, const FunctionalComplex& complex,
                         double inv_t);

/// Distance between (xi_i, xi_j) and (S_i, S_j) for the 1-simplex rho = {i, j}.
double pairwise_distance(const Simplex& rho, std::span<const double> pattern, std::span<const double> state,
                         DistanceBase base);

/// sqrt of the sum of squared pairwise distances over the 1-faces of s.
double ced(const Simplex& s, std::span<const double> pattern, std::span<const double> state, DistanceBase base);

/// |det| of the Cayley-Menger matrix of s with pairwise distances as edge lengths.
double cmd(const Simplex& s, std::span<const double> pattern, std::span<const double> state, DistanceBase base);

/// Determinant of the bordered matrix [[0, 1^T], [1, D]] for an m x m symmetric
/// matrix D of squared distances (row-major, zero diagonal). Sign not removed.
double cayley_menger_determinant(std::span<const double> squared_distances, std::size_t m);

/// Normalised per-pattern scores (length P, summing to 1).
///
/// Dot product: raw_mu = sum_s <xi_s^mu, S_s>, divided by the total. Distances:
/// raw_mu = sum_s dist_s, then reciprocals normalised to sum 1. A pattern at
/// distance exactly zero takes all the mass (split evenly between ties).
std::vector<double> similarity_vector(std::span<const double> state, const PatternSet& patterns,
                                      const FunctionalComplex& complex, const SimilarityMeasure& measure);

/// Numerically stable softmax(beta * scores).
std::vector<double> softmax(std::span<const double> scores, double beta);

/// softmax(beta * scores) times the pattern matrix.
std::vector<double> continuous_update(std::span<const double> state, const PatternSet& patterns,
                                      const FunctionalComplex& complex, const SimilarityMeasure& measure,
                                      double inv_t);

struct SettleOutcome {
  std::vector<double> state;
  std::size_t steps = 0;
  bool converged = false;  // max-norm change fell below tolerance
};

inline constexpr double kSettleTolerance = 1e-6;
inline constexpr std::size_t kSettleMaxSteps = 50;

/// Repeats continuous_update until the max-norm change is below `tolerance`
/// or `max_steps` updates have run.
SettleOutcome settle(std::span<const double> state, const PatternSet& patterns, const FunctionalComplex& complex,
                     const SimilarityMeasure& measure, double inv_t, double tolerance = kSettleTolerance,
                     std::size_t max_steps = kSettleMaxSteps);

}  // namespace shn

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shn/patterns.hpp"
#include "shn/simplex.hpp"

namespace shn {

/// The set of simplices that carry a weight, i.e. the network's connectivity.
///
/// Only simplices of dimension >= 1 may be functional; vertices are implied by
/// `n_vertices` and always carry weight 0. Faces of a functional simplex need
/// not be functional themselves, and missing faces act as weight-0 connections.
/// Simplices are kept in canonical order (dimension-major, lexicographic) and
/// the object is immutable once built.
class FunctionalComplex {
 public:
  FunctionalComplex() = default;
  /// `weights`, when non-empty, is aligned with `simplices` as given (before
  /// canonical sorting). Throws on duplicates, 0-simplices or vertices >= N.
  FunctionalComplex(std::size_t n_vertices, std::vector<Simplex> simplices, std::vector<double> weights = {});

  std::size_t n_vertices() const noexcept { return n_vertices_; }
  std::size_t size() const noexcept { return simplices_.size(); }
  bool empty() const noexcept { return simplices_.empty(); }
  std::span<const Simplex> simplices() const noexcept { return simplices_; }
  std::span<const double> weights() const noexcept { return weights_; }
  const Simplex& simplex(std::size_t idx) const { return simplices_[idx]; }
  double weight_at(std::size_t idx) const { return weights_[idx]; }

  bool contains(const Simplex& s) const { return index_.contains(s); }
  std::optional<std::size_t> index_of(const Simplex& s) const;
  /// nullopt when `s` is not functional.
  std::optional<double> weight(const Simplex& s) const;

  int max_dimension() const noexcept;
  /// counts[d] = number of functional d-simplices (counts[0] is always 0).
  std::vector<std::size_t> counts_by_dimension() const;

  /// Same structure, new weights aligned with `simplices()`.
  FunctionalComplex with_weights(std::vector<double> weights) const;

  /// Flattened vertex lists for hot loops: simplex k spans
  /// flat_vertices()[offsets()[k] .. offsets()[k+1]).
  std::span<const Vertex> flat_vertices() const noexcept { return flat_vertices_; }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }

 private:
  void rebuild_index();

  std::size_t n_vertices_ = 0;
  std::vector<Simplex> simplices_;
  std::vector<double> weights_;
  std::unordered_map<Simplex, std::size_t, SimplexHash> index_;
  std::vector<Vertex> flat_vertices_;
  std::vector<std::size_t> offsets_{0};
};

/// Every d-simplex on N vertices for 1 <= d <= k, weights zero.
FunctionalComplex build_k_skeleton(std::size_t n_vertices, int k);

/// Budget split across dimensions. `fractions[d]` is the share of `budget`
/// given to d-simplices.
struct DilutionSpec {
  std::uint64_t budget = 0;
  std::map<int, double> fractions;
};

/// Per-dimension counts: round half away from zero, then push any rounding
/// surplus or deficit onto the highest dimension so the total equals the budget.
std::map<int, std::uint64_t> dilution_counts(const DilutionSpec& spec);

/// Network condition keys. Overlined digits in the usual notation mark the
/// dominant dimensions and are written here in square brackets, e.g. "R1[2]".
enum class Condition { K1, R1b2, R12b, R1b2b, R2, R3, R1b23, R12b3, R123b, R123bbb };

Condition parse_condition(std::string_view name);
std::string_view to_string(Condition c) noexcept;
std::span<const Condition> all_conditions() noexcept;
/// Budget C(N, 2) split per the condition's table column.
DilutionSpec dilution_spec(Condition c, std::size_t n_vertices);

/// Exactly dilution_counts(spec)[d] distinct d-simplices per dimension, drawn
/// uniformly without replacement. Deterministic in `seed`.
FunctionalComplex sample_diluted(std::size_t n_vertices, const DilutionSpec& spec, std::uint64_t seed);

/// w(s) = (1/N) * sum_mu prod_{i in s} xi_i^mu for every functional simplex.
FunctionalComplex hebbian_weights(const FunctionalComplex& complex, const PatternSet& patterns);

/// N - #1-simplices + #2-simplices - ... over the functional set.
long long functional_euler_characteristic(const FunctionalComplex& complex);

/// C(n, k) as uint64; throws std::overflow_error when it does not fit.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// The `rank`-th k-subset of {0..n-1} in colexicographic order.
Simplex unrank_colex(std::uint64_t rank, std::size_t k, std::size_t n);

}  // namespace shn

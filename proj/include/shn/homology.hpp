#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shn/complex.hpp"
#include "shn/simplex.hpp"

namespace shn {

/// A downward-closed abstract simplicial complex, stored per dimension in
/// lexicographic order. The empty simplex is implicit.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Validates closure: every face of every member must also be a member.
  /// Throws std::invalid_argument naming the first missing face.
  static SimplicialComplex from_simplices(std::size_t n_vertices, std::vector<Simplex> simplices);

  std::size_t n_vertices() const noexcept { return n_vertices_; }
  /// -1 for the empty complex.
  int dimension() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }
  std::span<const Simplex> simplices(int k) const;
  std::size_t count(int k) const { return simplices(k).size(); }
  std::size_t size() const noexcept;
  bool contains(const Simplex& s) const;
  std::optional<std::size_t> index_of(const Simplex& s) const;
  /// All simplices, dimension-major.
  std::vector<Simplex> all_simplices() const;

  /// sum_k (-1)^k |K_k|
  long long euler_characteristic() const noexcept;

 private:
  std::size_t n_vertices_ = 0;
  std::vector<std::vector<Simplex>> by_dim_;
  std::unordered_map<Simplex, std::size_t, SimplexHash> index_;
};

/// Every face of every functional simplex plus all N vertices. Weights are dropped;
/// added faces are weight-0 by construction of the functional complex.
SimplicialComplex downward_closure(const FunctionalComplex& complex);
SimplicialComplex downward_closure(std::size_t n_vertices, std::span<const Simplex> simplices);

/// Sparse column-major boundary map C_k -> C_{k-1}. Entry for the face that drops
/// the i-th vertex (1-based) of a column simplex is (-1)^(i-1).
struct BoundaryMatrix {
  using Entry = std::pair<std::uint32_t, int>;  // row, coefficient

  int k = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Simplex> row_simplices;
  std::vector<Simplex> col_simplices;
  std::vector<std::vector<Entry>> columns;  // entries sorted by row

  int at(std::size_t row, std::size_t col) const;
  std::vector<std::vector<int>> dense() const;
};

/// k = 0 gives the zero map into C_{-1} (no rows).
BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int k);

enum class RankField {
  Rational,  ///< exact over Q
  GF2,       ///< fast; may differ from Q when the complex has torsion
};

/// Exact rank. Rational uses fraction-free column reduction with 64-bit
/// coefficients and falls back to arbitrary precision on overflow.
std::size_t matrix_rank(const BoundaryMatrix& m, RankField field = RankField::Rational);

struct BettiVector {
  std::vector<std::size_t> betti;

  std::size_t operator[](std::size_t k) const { return k < betti.size() ? betti[k] : 0; }
  long long euler_characteristic() const noexcept;
};

/// beta_k = nullity(d_k) - rank(d_{k+1}) for 0 <= k <= max_dim, with nullity(d_0) = #vertices.
BettiVector betti_numbers(const SimplicialComplex& complex, int max_dim, RankField field = RankField::Rational);
BettiVector betti_numbers(const SimplicialComplex& complex, RankField field = RankField::Rational);

/// Sample Pearson correlation. Throws std::domain_error when either input has zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);

}  // namespace shn

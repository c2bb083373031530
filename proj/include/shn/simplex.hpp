#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace shn {

using Vertex = std::uint32_t;

/// A sorted set of vertex indices; the unit of setwise connection.
///
/// Ordering is dimension-major, then lexicographic on the vertex list, which is
/// the canonical order used everywhere a collection of simplices is stored or
/// serialized.
class Simplex {
 public:
  Simplex() = default;

  /// Vertices must already be strictly increasing; throws std::invalid_argument otherwise.
  explicit Simplex(std::vector<Vertex> vertices);
  Simplex(std::initializer_list<Vertex> vertices);

  /// Sorts the input first. Duplicates are still rejected.
  static Simplex from_unsorted(std::vector<Vertex> vertices);

  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  /// |vertices| - 1; the empty simplex has dimension -1.
  int dimension() const noexcept { return static_cast<int>(vertices_.size()) - 1; }
  Vertex operator[](std::size_t i) const noexcept { return vertices_[i]; }
  Vertex max_vertex() const { return vertices_.back(); }

  bool contains(Vertex v) const noexcept;
  /// The face obtained by dropping the vertex at position `pos`.
  Simplex without_position(std::size_t pos) const;

  std::string to_string() const;

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) noexcept;

 private:
  std::vector<Vertex> vertices_;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

/// All k-dimensional faces of `s` in lexicographic order.
/// Throws std::invalid_argument when k > dim(s) or k < 0.
std::vector<Simplex> enumerate_faces(const Simplex& s, int k);

}  // namespace shn

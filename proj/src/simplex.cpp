#include "shn/simplex.hpp"

#include <algorithm>
#include <stdexcept>

namespace shn {

namespace {

void check_strictly_increasing(const std::vector<Vertex>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] >= v[i]) {
      throw std::invalid_argument("simplex vertices must be strictly increasing without duplicates");
    }
  }
}

}  // namespace

Simplex::Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  check_strictly_increasing(vertices_);
}

Simplex::Simplex(std::initializer_list<Vertex> vertices) : vertices_(vertices) {
  check_strictly_increasing(vertices_);
}

Simplex Simplex::from_unsorted(std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  return Simplex(std::move(vertices));
}

bool Simplex::contains(Vertex v) const noexcept {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

Simplex Simplex::without_position(std::size_t pos) const {
  if (pos >= vertices_.size()) throw std::out_of_range("simplex position out of range");
  Simplex face;
  face.vertices_.reserve(vertices_.size() - 1);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i != pos) face.vertices_.push_back(vertices_[i]);
  }
  return face;
}

std::string Simplex::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(vertices_[i]);
  }
  return out + "}";
}

std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) noexcept {
  if (auto c = a.vertices_.size() <=> b.vertices_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.vertices_.begin(), a.vertices_.end(),
                                                b.vertices_.begin(), b.vertices_.end());
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Vertex v : s.vertices()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<Simplex> enumerate_faces(const Simplex& s, int k) {
  if (k < 0 || k > s.dimension()) {
    throw std::invalid_argument("face dimension " + std::to_string(k) + " out of range for simplex " +
                                s.to_string());
  }
  const std::size_t n = s.size();
  const std::size_t r = static_cast<std::size_t>(k) + 1;
  std::vector<Simplex> faces;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  std::vector<Vertex> buf(r);
  while (true) {
    for (std::size_t i = 0; i < r; ++i) buf[i] = s[idx[i]];
    faces.emplace_back(buf);
    // advance to the next combination in lexicographic order
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return faces;
}

}  // namespace shn

#include "shn/homology.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shn {

// ---- SimplicialComplex -----------------------------------------------------

SimplicialComplex SimplicialComplex::from_simplices(std::size_t n_vertices, std::vector<Simplex> simplices) {
  SimplicialComplex out;
  out.n_vertices_ = n_vertices;
  std::sort(simplices.begin(), simplices.end());
  simplices.erase(std::unique(simplices.begin(), simplices.end()), simplices.end());
  for (auto& s : simplices) {
    if (s.empty()) continue;
    if (s.max_vertex() >= n_vertices) {
      throw std::invalid_argument("simplex " + s.to_string() + " exceeds vertex count " + std::to_string(n_vertices));
    }
    const auto d = static_cast<std::size_t>(s.dimension());
    if (out.by_dim_.size() <= d) out.by_dim_.resize(d + 1);
    out.index_.emplace(s, out.by_dim_[d].size());
    out.by_dim_[d].push_back(std::move(s));
  }
  for (std::size_t d = 1; d < out.by_dim_.size(); ++d) {
    for (const auto& s : out.by_dim_[d]) {
      for (std::size_t p = 0; p < s.size(); ++p) {
        auto face = s.without_position(p);
        if (!out.index_.contains(face)) {
          throw std::invalid_argument("not downward closed: face " + face.to_string() + " of " + s.to_string() +
                                      " is missing");
        }
      }
    }
  }
  return out;
}

std::span<const Simplex> SimplicialComplex::simplices(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= by_dim_.size()) return {};
  return by_dim_[static_cast<std::size_t>(k)];
}

std::size_t SimplicialComplex::size() const noexcept {
  std::size_t total = 0;
  for (const auto& d : by_dim_) total += d.size();
  return total;
}

bool SimplicialComplex::contains(const Simplex& s) const { return index_.contains(s); }

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Simplex> SimplicialComplex::all_simplices() const {
  std::vector<Simplex> out;
  out.reserve(size());
  for (const auto& d : by_dim_) out.insert(out.end(), d.begin(), d.end());
  return out;
}

long long SimplicialComplex::euler_characteristic() const noexcept {
  long long chi = 0;
  for (std::size_t d = 0; d < by_dim_.size(); ++d) {
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(by_dim_[d].size());
  }
  return chi;
}

SimplicialComplex downward_closure(std::size_t n_vertices, std::span<const Simplex> simplices) {
  std::unordered_map<Simplex, char, SimplexHash> seen;
  std::vector<Simplex> frontier(simplices.begin(), simplices.end());
  std::vector<Simplex> all;
  for (Vertex v = 0; v < n_vertices; ++v) {
    Simplex s{v};
    if (seen.emplace(s, 0).second) all.push_back(std::move(s));
  }
  while (!frontier.empty()) {
    Simplex s = std::move(frontier.back());
    frontier.pop_back();
    if (s.empty() || !seen.emplace(s, 0).second) continue;
    for (std::size_t p = 0; s.size() > 1 && p < s.size(); ++p) frontier.push_back(s.without_position(p));
    all.push_back(std::move(s));
  }
  return SimplicialComplex::from_simplices(n_vertices, std::move(all));
}

SimplicialComplex downward_closure(const FunctionalComplex& complex) {
  return downward_closure(complex.n_vertices(), complex.simplices());
}

// ---- boundary matrices -----------------------------------------------------

int BoundaryMatrix::at(std::size_t row, std::size_t col) const {
  for (auto [r, c] : columns.at(col)) {
    if (r == row) return c;
  }
  return 0;
}

std::vector<std::vector<int>> BoundaryMatrix::dense() const {
  std::vector<std::vector<int>> out(rows, std::vector<int>(cols, 0));
  for (std::size_t c = 0; c < cols; ++c) {
    for (auto [r, v] : columns[c]) out[r][c] = v;
  }
  return out;
}

BoundaryMatrix boundary_matrix(const SimplicialComplex& complex, int k) {
  if (k < 0 || k > std::max(complex.dimension(), 0)) {
    throw std::invalid_argument("boundary dimension " + std::to_string(k) + " out of range");
  }
  BoundaryMatrix m;
  m.k = k;
  auto cols = complex.simplices(k);
  m.col_simplices.assign(cols.begin(), cols.end());
  m.cols = cols.size();
  m.columns.resize(m.cols);
  if (k == 0) return m;
  auto rows = complex.simplices(k - 1);
  m.row_simplices.assign(rows.begin(), rows.end());
  m.rows = rows.size();
  for (std::size_t c = 0; c < m.cols; ++c) {
    const auto& s = cols[c];
    auto& col = m.columns[c];
    for (std::size_t p = 0; p < s.size(); ++p) {
      auto face = s.without_position(p);
      auto r = complex.index_of(face);
      if (!r) throw std::invalid_argument("complex is not downward closed at " + face.to_string());
      col.emplace_back(static_cast<std::uint32_t>(*r), p % 2 == 0 ? 1 : -1);
    }
    std::sort(col.begin(), col.end());
  }
  return m;
}

// ---- rank ------------------------------------------------------------------

namespace {

struct Overflow {};

struct Int64Ops {
  using T = long long;
  static T from(int v) { return v; }
  static T mul(T a, T b) {
    T r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static T sub(T a, T b) {
    T r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static bool is_zero(const T& a) { return a == 0; }
  static T gcd(T a, T b) { return std::gcd(a, b); }
  static T div(T a, T b) { return a / b; }
  static bool is_unit(const T& a) { return a == 1 || a == -1; }
};

struct MpzOps {
  using T = mpz_class;
  static T from(int v) { return T(v); }
  static T mul(const T& a, const T& b) { return a * b; }
  static T sub(const T& a, const T& b) { return a - b; }
  static bool is_zero(const T& a) { return sgn(a) == 0; }
  static T gcd(const T& a, const T& b) {
    T g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
  }
  static T div(const T& a, const T& b) {
    T q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static bool is_unit(const T& a) { return a == 1 || a == -1; }
};

/// Fraction-free column reduction: col_j <- a_k col_j - a_j col_k eliminates the
/// shared lowest row while staying in the integers; dividing by the column
/// content keeps entries small. Row-equivalence over Q is preserved, so the
/// number of non-empty reduced columns is the rank over Q.
template <typename Ops>
std::size_t rational_rank(const BoundaryMatrix& m) {
  using T = typename Ops::T;
  using Column = std::vector<std::pair<std::uint32_t, T>>;
  std::vector<Column> reduced;
  std::vector<std::int64_t> pivot_of(m.rows, -1);
  Column work, scratch;
  for (const auto& src : m.columns) {
    work.clear();
    for (auto [r, v] : src) work.emplace_back(r, Ops::from(v));
    while (!work.empty()) {
      const std::uint32_t low = work.back().first;
      const std::int64_t piv = pivot_of[low];
      if (piv < 0) break;
      const Column& other = reduced[static_cast<std::size_t>(piv)];
      const T a_other = other.back().second;
      const T a_work = work.back().second;
      scratch.clear();
      std::size_t i = 0, j = 0;
      while (i < work.size() || j < other.size()) {
        if (j == other.size() || (i < work.size() && work[i].first < other[j].first)) {
          scratch.emplace_back(work[i].first, Ops::mul(a_other, work[i].second));
          ++i;
        } else if (i == work.size() || other[j].first < work[i].first) {
          scratch.emplace_back(other[j].first, Ops::sub(T(0), Ops::mul(a_work, other[j].second)));
          ++j;
        } else {
          T v = Ops::sub(Ops::mul(a_other, work[i].second), Ops::mul(a_work, other[j].second));
          if (!Ops::is_zero(v)) scratch.emplace_back(work[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      if (!scratch.empty()) {
        T g = scratch.front().second;
        for (std::size_t p = 1; p < scratch.size() && !Ops::is_unit(g); ++p) g = Ops::gcd(g, scratch[p].second);
        if (g < 0) g = Ops::sub(T(0), g);
        if (!Ops::is_unit(g)) {
          for (auto& e : scratch) e.second = Ops::div(e.second, g);
        }
      }
      std::swap(work, scratch);
    }
    if (!work.empty()) {
      pivot_of[work.back().first] = static_cast<std::int64_t>(reduced.size());
      reduced.push_back(work);
    }
  }
  return reduced.size();
}

std::size_t gf2_rank(const BoundaryMatrix& m) {
  std::vector<std::vector<std::uint32_t>> reduced;
  std::vector<std::int64_t> pivot_of(m.rows, -1);
  std::vector<std::uint32_t> work, scratch;
  for (const auto& src : m.columns) {
    work.clear();
    for (auto [r, v] : src) {
      if (v % 2 != 0) work.push_back(r);
    }
    while (!work.empty()) {
      const std::int64_t piv = pivot_of[work.back()];
      if (piv < 0) break;
      const auto& other = reduced[static_cast<std::size_t>(piv)];
      scratch.clear();
      std::set_symmetric_difference(work.begin(), work.end(), other.begin(), other.end(), std::back_inserter(scratch));
      std::swap(work, scratch);
    }
    if (!work.empty()) {
      pivot_of[work.back()] = static_cast<std::int64_t>(reduced.size());
      reduced.push_back(work);
    }
  }
  return reduced.size();
}

}  // namespace

std::size_t matrix_rank(const BoundaryMatrix& m, RankField field) {
  if (m.rows == 0 || m.cols == 0) return 0;
  if (field == RankField::GF2) return gf2_rank(m);
  try {
    return rational_rank<Int64Ops>(m);
  } catch (const Overflow&) {
    return rational_rank<MpzOps>(m);
  }
}

// ---- Betti numbers ---------------------------------------------------------

long long BettiVector::euler_characteristic() const noexcept {
  long long chi = 0;
  for (std::size_t k = 0; k < betti.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(betti[k]);
  return chi;
}

BettiVector betti_numbers(const SimplicialComplex& complex, int max_dim, RankField field) {
  if (max_dim < 0) throw std::invalid_argument("max_dim must be >= 0");
  BettiVector out;
  out.betti.assign(static_cast<std::size_t>(max_dim) + 1, 0);
  const int top = complex.dimension();
  // rank of d_k for k = 0 .. max_dim + 1; d_0 is the zero map
  std::vector<std::size_t> rank(static_cast<std::size_t>(max_dim) + 2, 0);
  for (int k = 1; k <= max_dim + 1 && k <= top; ++k) {
    rank[static_cast<std::size_t>(k)] = matrix_rank(boundary_matrix(complex, k), field);
  }
  for (int k = 0; k <= max_dim; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const std::size_t nullity = complex.count(k) - rank[uk];
    out.betti[uk] = nullity - rank[uk + 1];
  }
  return out;
}

BettiVector betti_numbers(const SimplicialComplex& complex, RankField field) {
  return betti_numbers(complex, std::max(complex.dimension(), 0), field);
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson_r needs equal-length inputs");
  if (x.size() < 2) throw std::invalid_argument("pearson_r needs at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("pearson_r undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace shn

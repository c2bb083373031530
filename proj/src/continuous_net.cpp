#include "shn/continuous_net.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shn {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void check_inputs(std::span<const double> state, const PatternSet& patterns, const FunctionalComplex& complex) {
  patterns.require_kind(PatternKind::Continuous, "continuous network");
  if (patterns.width() != complex.n_vertices() || state.size() != complex.n_vertices()) {
    throw std::invalid_argument("state length " + std::to_string(state.size()) + ", pattern width " +
                                std::to_string(patterns.width()) + " and N " + std::to_string(complex.n_vertices()) +
                                " must agree");
  }
}

double pair_sq(double da, double db, DistanceBase base) {
  if (base == DistanceBase::Euclidean) return da * da + db * db;
  const double d = std::abs(da) + std::abs(db);
  return d * d;
}

/// Cayley-Menger |det| for a simplex given per-vertex differences delta.
double cmd_from_deltas(std::span<const double> delta, DistanceBase base) {
  const std::size_t m = delta.size();
  if (m == 2) return 2.0 * pair_sq(delta[0], delta[1], base);
  if (m == 3) {
    const double a = pair_sq(delta[0], delta[1], base);
    const double b = pair_sq(delta[0], delta[2], base);
    const double c = pair_sq(delta[1], delta[2], base);
    return std::abs(a * a + b * b + c * c - 2.0 * (a * b + a * c + b * c));
  }
  std::array<double, 64> buf{};
  std::vector<double> heap;
  double* d = buf.data();
  if (m * m > buf.size()) {
    heap.resize(m * m);
    d = heap.data();
  }
  for (std::size_t i = 0; i < m; ++i) {
    d[i * m + i] = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) d[i * m + j] = d[j * m + i] = pair_sq(delta[i], delta[j], base);
  }
  return std::abs(cayley_menger_determinant({d, m * m}, m));
}

}  // namespace

SimilarityMeasure SimilarityMeasure::parse(std::string_view name) {
  const auto n = lowercase(name);
  if (n == "dot" || n == "dotproduct" || n == "dot-product") return dot();
  if (n == "euclidean" || n == "euclideandist") return euclidean();
  if (n == "manhattan" || n == "manhattandist") return manhattan();
  if (n == "ced" || n == "ced(euclidean)" || n == "ced-euclidean") return ced(DistanceBase::Euclidean);
  if (n == "ced(manhattan)" || n == "ced-manhattan") return ced(DistanceBase::Manhattan);
  if (n == "cmd" || n == "cmd(euclidean)" || n == "cmd-euclidean") return cmd(DistanceBase::Euclidean);
  if (n == "cmd(manhattan)" || n == "cmd-manhattan") return cmd(DistanceBase::Manhattan);
  throw std::invalid_argument("unknown similarity measure '" + std::string(name) +
                              "' (DotProduct, EuclideanDist, ManhattanDist, Ced, Cmd, Ced(Manhattan), Cmd(Manhattan))");
}

std::string SimilarityMeasure::name() const {
  switch (kind) {
    case Kind::DotProduct:
      return "DotProduct";
    case Kind::Euclidean:
      return "EuclideanDist";
    case Kind::Manhattan:
      return "ManhattanDist";
    case Kind::Ced:
      return base == DistanceBase::Euclidean ? "Ced" : "Ced(Manhattan)";
    case Kind::Cmd:
      return base == DistanceBase::Euclidean ? "Cmd" : "Cmd(Manhattan)";
  }
  return "?";
}

double lse(double inv_t, const PatternSet& patterns, std::span<const double> state, const FunctionalComplex& complex) {
  if (!(inv_t > 0.0)) throw std::invalid_argument("inverse temperature must be positive");
  if (complex.empty()) throw std::invalid_argument("lse over an empty complex");
  check_inputs(state, patterns, complex);
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();
  std::vector<double> args;
  args.reserve(patterns.num_patterns() * complex.size());
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    const auto xi = patterns.row(mu);
    for (std::size_t k = 0; k < complex.size(); ++k) {
      double prod = 1.0;
      for (std::size_t p = off[k]; p < off[k + 1]; ++p) prod *= xi[flat[p]] * state[flat[p]];
      args.push_back(inv_t * prod);
    }
  }
  const double top = *std::max_element(args.begin(), args.end());
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - top);
  return (top + std::log(sum)) / inv_t;
}

double continuous_energy(std::span<const double> state, const PatternSet& patterns, const FunctionalComplex& complex,
                         double inv_t) {
  const double sq = std::inner_product(state.begin(), state.end(), state.begin(), 0.0);
  return -lse(inv_t, patterns, state, complex) + 0.5 * sq;
}

double pairwise_distance(const Simplex& rho, std::span<const double> pattern, std::span<const double> state,
                         DistanceBase base) {
  if (rho.size() != 2) throw std::invalid_argument("pairwise distance needs a 1-simplex, got " + rho.to_string());
  const double da = pattern[rho[0]] - state[rho[0]];
  const double db = pattern[rho[1]] - state[rho[1]];
  return base == DistanceBase::Euclidean ? std::sqrt(da * da + db * db) : std::abs(da) + std::abs(db);
}

double ced(const Simplex& s, std::span<const double> pattern, std::span<const double> state, DistanceBase base) {
  if (s.dimension() < 1) throw std::invalid_argument("ced needs dimension >= 1");
  double total = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      total += pair_sq(pattern[s[a]] - state[s[a]], pattern[s[b]] - state[s[b]], base);
    }
  }
  return std::sqrt(total);
}

double cmd(const Simplex& s, std::span<const double> pattern, std::span<const double> state, DistanceBase base) {
  if (s.dimension() < 1) throw std::invalid_argument("cmd needs dimension >= 1");
  std::vector<double> delta(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) delta[a] = pattern[s[a]] - state[s[a]];
  return cmd_from_deltas(delta, base);
}

double cayley_menger_determinant(std::span<const double> squared_distances, std::size_t m) {
  if (squared_distances.size() != m * m) throw std::invalid_argument("distance matrix must be m x m");
  const std::size_t n = m + 1;
  std::vector<double> a(n * n, 1.0);
  a[0] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[(i + 1) * n + (j + 1)] = squared_distances[i * m + j];
  }
  // LU with partial pivoting
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (a[piv * n + col] == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      det = -det;
    }
    const double p = a[col * n + col];
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

std::vector<double> similarity_vector(std::span<const double> state, const PatternSet& patterns,
                                      const FunctionalComplex& complex, const SimilarityMeasure& measure) {
  check_inputs(state, patterns, complex);
  const std::size_t n = complex.n_vertices();
  const std::size_t num = patterns.num_patterns();
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();
  std::vector<double> raw(num, 0.0);

  if (measure.kind == SimilarityMeasure::Kind::DotProduct) {
    // sum_s sum_{i in s} xi_i S_i = sum_i (#simplices containing i) xi_i S_i
    std::vector<double> multiplicity(n, 0.0);
    for (Vertex v : flat) multiplicity[v] += 1.0;
    for (std::size_t mu = 0; mu < num; ++mu) {
      const auto xi = patterns.row(mu);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += multiplicity[i] * xi[i] * state[i];
      raw[mu] = acc;
    }
    double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (!(total > 0.0)) total = std::accumulate(raw.begin(), raw.end(), 0.0, [](double a, double b) { return a + std::abs(b); });
    if (total > 0.0) {
      for (auto& r : raw) r /= total;
    }
    return raw;
  }

  std::vector<double> delta(n), sq(n), ab(n);
  std::array<double, 16> local{};
  for (std::size_t mu = 0; mu < num; ++mu) {
    const auto xi = patterns.row(mu);
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = xi[i] - state[i];
      sq[i] = delta[i] * delta[i];
      ab[i] = std::abs(delta[i]);
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < complex.size(); ++k) {
      const std::size_t b = off[k], e = off[k + 1];
      switch (measure.kind) {
        case SimilarityMeasure::Kind::Euclidean: {
          double s = 0.0;
          for (std::size_t p = b; p < e; ++p) s += sq[flat[p]];
          acc += std::sqrt(s);
          break;
        }
        case SimilarityMeasure::Kind::Manhattan: {
          for (std::size_t p = b; p < e; ++p) acc += ab[flat[p]];
          break;
        }
        case SimilarityMeasure::Kind::Ced: {
          double s = 0.0;
          if (measure.base == DistanceBase::Euclidean) {
            // each vertex appears in (m - 1) of the pairs
            for (std::size_t p = b; p < e; ++p) s += sq[flat[p]];
            s *= static_cast<double>(e - b - 1);
          } else {
            for (std::size_t p = b; p < e; ++p) {
              for (std::size_t q = p + 1; q < e; ++q) {
                const double d = ab[flat[p]] + ab[flat[q]];
                s += d * d;
              }
            }
          }
          acc += std::sqrt(s);
          break;
        }
        case SimilarityMeasure::Kind::Cmd: {
          const std::size_t m = e - b;
          std::vector<double> big;
          double* dl = local.data();
          if (m > local.size()) {
            big.resize(m);
            dl = big.data();
          }
          for (std::size_t p = b; p < e; ++p) dl[p - b] = delta[flat[p]];
          acc += cmd_from_deltas({dl, m}, measure.base);
          break;
        }
        case SimilarityMeasure::Kind::DotProduct:
          break;
      }
    }
    raw[mu] = acc;
  }

  std::vector<double> scores(num, 0.0);
  const auto zeros = static_cast<std::size_t>(std::count(raw.begin(), raw.end(), 0.0));
  if (zeros > 0) {
    for (std::size_t mu = 0; mu < num; ++mu) scores[mu] = raw[mu] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
    return scores;
  }
  double total = 0.0;
  for (std::size_t mu = 0; mu < num; ++mu) {
    scores[mu] = 1.0 / raw[mu];
    total += scores[mu];
  }
  for (auto& s : scores) s /= total;
  return scores;
}

std::vector<double> softmax(std::span<const double> scores, double beta) {
  if (scores.empty()) return {};
  std::vector<double> out(scores.size());
  double top = -std::numeric_limits<double>::infinity();
  for (double s : scores) top = std::max(top, beta * s);
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(beta * scores[i] - top);
    total += out[i];
  }
  for (auto& o : out) o /= total;
  return out;
}

std::vector<double> continuous_update(std::span<const double> state, const PatternSet& patterns,
                                      const FunctionalComplex& complex, const SimilarityMeasure& measure,
                                      double inv_t) {
  if (!(inv_t > 0.0)) throw std::invalid_argument("inverse temperature must be positive");
  const auto weights = softmax(similarity_vector(state, patterns, complex, measure), inv_t);
  std::vector<double> out(patterns.width(), 0.0);
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    if (weights[mu] == 0.0) continue;
    const auto xi = patterns.row(mu);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += weights[mu] * xi[i];
  }
  return out;
}

SettleOutcome settle(std::span<const double> state, const PatternSet& patterns, const FunctionalComplex& complex,
                     const SimilarityMeasure& measure, double inv_t, double tolerance, std::size_t max_steps) {
  SettleOutcome out;
  out.state.assign(state.begin(), state.end());
  for (std::size_t t = 0; t < max_steps; ++t) {
    auto next = continuous_update(out.state, patterns, complex, measure, inv_t);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - out.state[i]));
    out.state = std::move(next);
    out.steps = t + 1;
    if (change < tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace shn

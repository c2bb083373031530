#include "shn/complex.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace shn {

FunctionalComplex::FunctionalComplex(std::size_t n_vertices, std::vector<Simplex> simplices,
                                     std::vector<double> weights)
    : n_vertices_(n_vertices) {
  if (n_vertices == 0) throw std::invalid_argument("complex needs at least one vertex");
  if (!weights.empty() && weights.size() != simplices.size()) {
    throw std::invalid_argument("weights must align with simplices");
  }
  if (weights.empty()) weights.assign(simplices.size(), 0.0);
  for (const auto& s : simplices) {
    if (s.dimension() < 1) throw std::invalid_argument("functional simplices need dimension >= 1, got " + s.to_string());
    if (s.max_vertex() >= n_vertices) {
      throw std::invalid_argument("simplex " + s.to_string() + " exceeds vertex count " + std::to_string(n_vertices));
    }
  }
  std::vector<std::size_t> order(simplices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return simplices[a] < simplices[b]; });
  simplices_.reserve(order.size());
  weights_.reserve(order.size());
  for (std::size_t idx : order) {
    if (!simplices_.empty() && simplices_.back() == simplices[idx]) {
      throw std::invalid_argument("duplicate simplex " + simplices[idx].to_string());
    }
    simplices_.push_back(std::move(simplices[idx]));
    weights_.push_back(weights[idx]);
  }
  rebuild_index();
}

void FunctionalComplex::rebuild_index() {
  index_.clear();
  index_.reserve(simplices_.size());
  flat_vertices_.clear();
  offsets_.assign(1, 0);
  for (std::size_t k = 0; k < simplices_.size(); ++k) {
    index_.emplace(simplices_[k], k);
    auto v = simplices_[k].vertices();
    flat_vertices_.insert(flat_vertices_.end(), v.begin(), v.end());
    offsets_.push_back(flat_vertices_.size());
  }
}

std::optional<std::size_t> FunctionalComplex::index_of(const Simplex& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> FunctionalComplex::weight(const Simplex& s) const {
  if (auto idx = index_of(s)) return weights_[*idx];
  return std::nullopt;
}

int FunctionalComplex::max_dimension() const noexcept {
  return simplices_.empty() ? 0 : simplices_.back().dimension();
}

std::vector<std::size_t> FunctionalComplex::counts_by_dimension() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_dimension()) + 1, 0);
  for (const auto& s : simplices_) ++counts[static_cast<std::size_t>(s.dimension())];
  return counts;
}

FunctionalComplex FunctionalComplex::with_weights(std::vector<double> weights) const {
  if (weights.size() != simplices_.size()) throw std::invalid_argument("weights must align with simplices");
  FunctionalComplex out = *this;
  out.weights_ = std::move(weights);
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

Simplex unrank_colex(std::uint64_t rank, std::size_t k, std::size_t n) {
  std::vector<Vertex> out(k);
  std::uint64_t upper = n;
  for (std::size_t i = k; i > 0; --i) {
    // largest v < upper with C(v, i) <= rank
    std::uint64_t lo = i - 1, hi = upper - 1;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (binomial(mid, i) <= rank) lo = mid; else hi = mid - 1;
    }
    out[i - 1] = static_cast<Vertex>(lo);
    rank -= binomial(lo, i);
    upper = lo;
  }
  return Simplex(std::move(out));
}

FunctionalComplex build_k_skeleton(std::size_t n_vertices, int k) {
  if (n_vertices < 1) throw std::invalid_argument("k-skeleton needs N >= 1");
  if (k < 1 || static_cast<std::size_t>(k) >= n_vertices) {
    throw std::invalid_argument("k-skeleton needs 1 <= k < N (k=" + std::to_string(k) +
                                ", N=" + std::to_string(n_vertices) + ")");
  }
  std::vector<Simplex> simplices;
  std::vector<Vertex> all(n_vertices);
  std::iota(all.begin(), all.end(), Vertex{0});
  const Simplex full(all);
  for (int d = 1; d <= k; ++d) {
    auto faces = enumerate_faces(full, d);
    simplices.insert(simplices.end(), std::make_move_iterator(faces.begin()), std::make_move_iterator(faces.end()));
  }
  return FunctionalComplex(n_vertices, std::move(simplices));
}

std::map<int, std::uint64_t> dilution_counts(const DilutionSpec& spec) {
  std::map<int, std::uint64_t> counts;
  double total_fraction = 0.0;
  for (auto [d, f] : spec.fractions) {
    if (d < 1) throw std::invalid_argument("dilution dimensions start at 1");
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("dilution fractions must lie in [0, 1]");
    total_fraction += f;
  }
  if (spec.fractions.empty() || std::abs(total_fraction - 1.0) > 1e-9) {
    throw std::invalid_argument("dilution fractions must sum to 1");
  }
  long long total = 0;
  for (auto [d, f] : spec.fractions) {
    // std::llround rounds halves away from zero.
    const auto c = std::llround(f * static_cast<double>(spec.budget));
    counts[d] = static_cast<std::uint64_t>(c);
    total += c;
  }
  const long long diff = total - static_cast<long long>(spec.budget);
  if (diff != 0) {
    auto& top = counts.rbegin()->second;
    if (diff > 0 && static_cast<long long>(top) < diff) throw std::invalid_argument("cannot rebalance dilution counts");
    top = static_cast<std::uint64_t>(static_cast<long long>(top) - diff);
  }
  return counts;
}

namespace {

struct ConditionRow {
  Condition key;
  std::string_view name;
  std::array<double, 3> fractions;  // dims 1, 2, 3
};

constexpr std::array<ConditionRow, 10> kConditions{{
    {Condition::K1, "K1", {1.0, 0.0, 0.0}},
    {Condition::R1b2, "R[1]2", {0.75, 0.25, 0.0}},
    {Condition::R1b2b, "R[12]", {0.5, 0.5, 0.0}},
    {Condition::R12b, "R1[2]", {0.25, 0.75, 0.0}},
    {Condition::R2, "R2", {0.0, 1.0, 0.0}},
    {Condition::R3, "R3", {0.0, 0.0, 1.0}},
    {Condition::R1b23, "R[1]23", {0.5, 0.25, 0.25}},
    {Condition::R12b3, "R1[2]3", {0.25, 0.5, 0.25}},
    {Condition::R123b, "R12[3]", {0.25, 0.25, 0.5}},
    {Condition::R123bbb, "R[123]", {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
}};

const std::array<Condition, 10> kConditionList = [] {
  std::array<Condition, 10> out{};
  for (std::size_t i = 0; i < kConditions.size(); ++i) out[i] = kConditions[i].key;
  return out;
}();

const ConditionRow& row_for(Condition c) {
  for (const auto& row : kConditions) {
    if (row.key == c) return row;
  }
  throw std::invalid_argument("unknown condition");
}

}  // namespace

Condition parse_condition(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
  };
  for (const auto& row : kConditions) {
    if (lower(row.name) == lower(name)) return row.key;
  }
  throw std::invalid_argument("unknown condition key '" + std::string(name) +
                              "' (expected one of K1, R[1]2, R[12], R1[2], R2, R3, R[1]23, R1[2]3, R12[3], R[123])");
}

std::string_view to_string(Condition c) noexcept {
  for (const auto& row : kConditions) {
    if (row.key == c) return row.name;
  }
  return "?";
}

std::span<const Condition> all_conditions() noexcept { return kConditionList; }

DilutionSpec dilution_spec(Condition c, std::size_t n_vertices) {
  DilutionSpec spec;
  spec.budget = binomial(n_vertices, 2);
  const auto& row = row_for(c);
  for (int d = 1; d <= 3; ++d) {
    if (row.fractions[d - 1] > 0.0) spec.fractions[d] = row.fractions[d - 1];
  }
  return spec;
}

FunctionalComplex sample_diluted(std::size_t n_vertices, const DilutionSpec& spec, std::uint64_t seed) {
  const auto counts = dilution_counts(spec);
  std::mt19937_64 rng(seed);
  std::vector<Simplex> simplices;
  for (auto [d, count] : counts) {
    if (count == 0) continue;
    const std::size_t k = static_cast<std::size_t>(d) + 1;
    if (k > n_vertices) {
      throw std::invalid_argument("cannot place " + std::to_string(d) + "-simplices on " + std::to_string(n_vertices) +
                                  " vertices");
    }
    const std::uint64_t available = binomial(n_vertices, k);
    if (count > available) {
      throw std::invalid_argument("requested " + std::to_string(count) + " " + std::to_string(d) +
                                  "-simplices but only " + std::to_string(available) + " exist");
    }
    // Floyd's algorithm: `count` distinct ranks from [0, available).
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(count * 2);
    std::vector<std::uint64_t> ranks;
    ranks.reserve(count);
    for (std::uint64_t j = available - count; j < available; ++j) {
      const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
      const std::uint64_t pick = chosen.insert(t).second ? t : j;
      if (pick == j) chosen.insert(j);
      ranks.push_back(pick);
    }
    for (std::uint64_t r : ranks) simplices.push_back(unrank_colex(r, k, n_vertices));
  }
  return FunctionalComplex(n_vertices, std::move(simplices));
}

FunctionalComplex hebbian_weights(const FunctionalComplex& complex, const PatternSet& patterns) {
  patterns.require_kind(PatternKind::Binary, "hebbian_weights");
  const std::size_t n = complex.n_vertices();
  if (patterns.width() != n) {
    throw std::invalid_argument("pattern width " + std::to_string(patterns.width()) + " != N " + std::to_string(n));
  }
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();
  std::vector<double> weights(complex.size(), 0.0);
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    const auto xi = patterns.row(mu);
    for (std::size_t k = 0; k < complex.size(); ++k) {
      double prod = 1.0;
      for (std::size_t p = off[k]; p < off[k + 1]; ++p) prod *= xi[flat[p]];
      weights[k] += prod;
    }
  }
  for (auto& w : weights) w /= static_cast<double>(n);
  return complex.with_weights(std::move(weights));
}

long long functional_euler_characteristic(const FunctionalComplex& complex) {
  long long chi = static_cast<long long>(complex.n_vertices());
  for (const auto& s : complex.simplices()) chi += (s.dimension() % 2 == 0) ? 1 : -1;
  return chi;
}

}  // namespace shn

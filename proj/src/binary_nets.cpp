#include "shn/binary_nets.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "shn/rng.hpp"

namespace shn {

namespace {

void check_state(const BinaryState& state, const FunctionalComplex& complex) {
  if (state.size() != complex.n_vertices()) {
    throw std::invalid_argument("state length " + std::to_string(state.size()) + " != N " +
                                std::to_string(complex.n_vertices()));
  }
}

void check_patterns(const PatternSet& patterns, const FunctionalComplex& complex) {
  patterns.require_kind(PatternKind::Binary, "binary network");
  if (patterns.width() != complex.n_vertices()) {
    throw std::invalid_argument("pattern width " + std::to_string(patterns.width()) + " != N " +
                                std::to_string(complex.n_vertices()));
  }
}

// Fields whose magnitude is within accumulated rounding of zero count as zero,
// so an exactly balanced field still resolves to +1.
inline std::int8_t theta(double x, double scale) { return x >= -1e-12 * scale ? 1 : -1; }

}  // namespace

BinaryState BinaryState::from_values(std::span<const double> values) {
  BinaryState s;
  s.spins.reserve(values.size());
  for (double v : values) {
    if (v != 1.0 && v != -1.0) throw std::invalid_argument("binary state entries must be +/-1");
    s.spins.push_back(static_cast<std::int8_t>(v));
  }
  return s;
}

BinaryState random_binary_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BinaryState s;
  s.spins.resize(n);
  for (auto& x : s.spins) x = static_cast<std::int8_t>(random_sign(rng));
  return s;
}

InteractionFn InteractionFn::polynomial(int n) {
  if (n < 2) throw std::invalid_argument("polynomial interaction needs degree >= 2");
  return {Kind::Polynomial, n};
}

double InteractionFn::operator()(double x) const {
  if (kind == Kind::Exponential) return std::exp(x);
  double r = 1.0;
  for (int k = 0; k < degree; ++k) r *= x;
  return r;
}

double traditional_energy(const BinaryState& state, const FunctionalComplex& complex) {
  check_state(state, complex);
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();
  const auto w = complex.weights();
  double e = 0.0;
  for (std::size_t k = 0; k < complex.size(); ++k) {
    int prod = 1;
    for (std::size_t p = off[k]; p < off[k + 1]; ++p) prod *= state.spins[flat[p]];
    e -= w[k] * prod;
  }
  return e;
}

namespace {

void accumulate_fields(const BinaryState& state, const FunctionalComplex& complex, std::vector<double>& h,
                       std::vector<double>& scale) {
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();
  const auto w = complex.weights();
  h.assign(complex.n_vertices(), 0.0);
  scale.assign(complex.n_vertices(), 0.0);
  for (std::size_t k = 0; k < complex.size(); ++k) {
    int prod = 1;
    for (std::size_t p = off[k]; p < off[k + 1]; ++p) prod *= state.spins[flat[p]];
    // spins are +/-1, so the product without i is prod * S_i
    for (std::size_t p = off[k]; p < off[k + 1]; ++p) {
      h[flat[p]] += w[k] * (prod * state.spins[flat[p]]);
      scale[flat[p]] += std::abs(w[k]);
    }
  }
}

}  // namespace

std::vector<double> traditional_local_fields(const BinaryState& state, const FunctionalComplex& complex) {
  check_state(state, complex);
  std::vector<double> h, scale;
  accumulate_fields(state, complex, h, scale);
  return h;
}

BinaryState traditional_update_sync(const BinaryState& state, const FunctionalComplex& complex) {
  check_state(state, complex);
  std::vector<double> h, scale;
  accumulate_fields(state, complex, h, scale);
  BinaryState next{Spins(h.size()), state.time_step + 1};
  for (std::size_t i = 0; i < h.size(); ++i) next.spins[i] = theta(h[i], scale[i]);
  return next;
}

BinaryState traditional_update_async(const BinaryState& state, const FunctionalComplex& complex, std::size_t i) {
  check_state(state, complex);
  if (i >= state.size()) throw std::out_of_range("neuron index " + std::to_string(i) + " out of range");
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();
  const auto w = complex.weights();
  double h = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < complex.size(); ++k) {
    bool has_i = false;
    int prod = 1;
    for (std::size_t p = off[k]; p < off[k + 1]; ++p) {
      if (flat[p] == i) has_i = true; else prod *= state.spins[flat[p]];
    }
    if (has_i) {
      h += w[k] * prod;
      scale += std::abs(w[k]);
    }
  }
  BinaryState next = state;
  next.spins[i] = theta(h, scale);
  next.time_step = state.time_step + 1;
  return next;
}

double modern_energy(const BinaryState& state, const PatternSet& patterns, const FunctionalComplex& complex,
                     const InteractionFn& f) {
  check_state(state, complex);
  check_patterns(patterns, complex);
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();
  double e = 0.0;
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    const auto xi = patterns.row(mu);
    for (std::size_t k = 0; k < complex.size(); ++k) {
      double prod = 1.0;
      for (std::size_t p = off[k]; p < off[k + 1]; ++p) prod *= xi[flat[p]] * state.spins[flat[p]];
      e -= f(prod);
    }
  }
  return e;
}

BinaryState modern_update_sync(const BinaryState& state, const PatternSet& patterns, const FunctionalComplex& complex,
                               const InteractionFn& f) {
  check_state(state, complex);
  check_patterns(patterns, complex);
  const std::size_t n = complex.n_vertices();
  const std::size_t num = patterns.num_patterns();
  const auto flat = complex.flat_vertices();
  const auto off = complex.offsets();

  // c[mu * n + i] = sum over simplices containing i of prod_{j != i} xi_j^mu S_j
  std::vector<double> c(num * n, 0.0);
  for (std::size_t mu = 0; mu < num; ++mu) {
    const auto xi = patterns.row(mu);
    double* cm = c.data() + mu * n;
    for (std::size_t k = 0; k < complex.size(); ++k) {
      double prod = 1.0;
      for (std::size_t p = off[k]; p < off[k + 1]; ++p) prod *= xi[flat[p]] * state.spins[flat[p]];
      // each factor is +/-1, so dividing out i is multiplying by it
      for (std::size_t p = off[k]; p < off[k + 1]; ++p) cm[flat[p]] += prod * xi[flat[p]] * state.spins[flat[p]];
    }
  }

  BinaryState next{Spins(n), state.time_step + 1};
  for (std::size_t i = 0; i < n; ++i) {
    double drive = 0.0, scale = 0.0;
    if (f.kind == InteractionFn::Kind::Exponential) {
      // e^{x+c} - e^{-x+c} = 2 sinh(x) e^c with x = xi_i^mu = +/-1, so the sign is that of
      // sum_mu xi_i^mu e^{c_mu}; shift by the largest c so nothing overflows.
      double ref = -std::numeric_limits<double>::infinity();
      for (std::size_t mu = 0; mu < num; ++mu) ref = std::max(ref, c[mu * n + i]);
      for (std::size_t mu = 0; mu < num; ++mu) {
        const double term = std::exp(c[mu * n + i] - ref);
        drive += patterns(mu, i) * term;
        scale += term;
      }
    } else {
      for (std::size_t mu = 0; mu < num; ++mu) {
        const double x = patterns(mu, i);
        const double ci = c[mu * n + i];
        const double a = f(x + ci), b = f(-x + ci);
        drive += a - b;
        scale += std::abs(a) + std::abs(b);
      }
    }
    next.spins[i] = theta(drive, scale);
  }
  return next;
}

std::string_view to_string(StopReason r) noexcept {
  return r == StopReason::EnergyNonDecreasing ? "energy_non_decreasing" : "max_steps";
}

std::string_view to_string(StopRule r) noexcept {
  return r == StopRule::FirstNonDecrease ? "first_non_decrease" : "stationary";
}

StopRule parse_stop_rule(std::string_view name) {
  if (name == "first_non_decrease" || name == "first-non-decrease") return StopRule::FirstNonDecrease;
  if (name == "stationary") return StopRule::Stationary;
  throw std::invalid_argument("unknown stop rule '" + std::string(name) + "' (first_non_decrease, stationary)");
}

RunOutcome run_to_convergence(const BinaryState& initial, const Dynamics& dynamics, const FunctionalComplex& complex,
                              const PatternSet& patterns, std::size_t max_steps, StopRule rule) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  auto energy = [&](const BinaryState& s) {
    if (const auto* m = std::get_if<ModernDynamics>(&dynamics)) return modern_energy(s, patterns, complex, m->f);
    return traditional_energy(s, complex);
  };
  auto step = [&](const BinaryState& s) {
    if (const auto* m = std::get_if<ModernDynamics>(&dynamics)) return modern_update_sync(s, patterns, complex, m->f);
    return traditional_update_sync(s, complex);
  };

  RunOutcome out;
  out.final_state = initial;
  out.energy_trace.push_back(energy(initial));
  for (std::size_t t = 1; t <= max_steps; ++t) {
    BinaryState next = step(out.final_state);
    const double e = energy(next);
    out.energy_trace.push_back(e);
    out.steps_taken = t;
    const double prev = out.energy_trace[t - 1];
    if (rule == StopRule::FirstNonDecrease ? e >= prev : e == prev) {
      out.stop_reason = StopReason::EnergyNonDecreasing;
      return out;
    }
    out.final_state = std::move(next);
  }
  out.stop_reason = StopReason::MaxSteps;
  return out;
}

}  // namespace shn

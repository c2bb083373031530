#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "shn/complex.hpp"
#include "shn/patterns.hpp"

namespace shn {

using Spins = std::vector<std::int8_t>;

/// +/-1 spin vector plus the time step it was produced at.
struct BinaryState {
  Spins spins;
  std::size_t time_step = 0;

  static BinaryState from_values(std::span<const double> values);
  std::size_t size() const noexcept { return spins.size(); }
  friend bool operator==(const BinaryState& a, const BinaryState& b) { return a.spins == b.spins; }
};

/// Uniform i.i.d. +/-1 state.
BinaryState random_binary_state(std::size_t n, std::uint64_t seed);

/// F(x) = x^n or F(x) = e^x.
struct InteractionFn {
  enum class Kind { Polynomial, Exponential };
  Kind kind = Kind::Polynomial;
  int degree = 2;

  static InteractionFn polynomial(int n);
  static InteractionFn exponential() { return {Kind::Exponential, 0}; }
  double operator()(double x) const;
};

/// E = -sum_s w(s) S_s over functional simplices.
double traditional_energy(const BinaryState& state, const FunctionalComplex& complex);

/// h_i = sum_{s containing i} w(s) prod_{j in s, j != i} S_j
std::vector<double> traditional_local_fields(const BinaryState& state, const FunctionalComplex& complex);

/// Synchronous threshold update; a zero field maps to +1.
BinaryState traditional_update_sync(const BinaryState& state, const FunctionalComplex& complex);
/// Updates neuron i only. Throws std::out_of_range for a bad index.
BinaryState traditional_update_async(const BinaryState& state, const FunctionalComplex& complex, std::size_t i);

/// E = -sum_mu sum_s F(xi_s^mu S_s)
double modern_energy(const BinaryState& state, const PatternSet& patterns, const FunctionalComplex& complex,
                     const InteractionFn& f);

/// S_i <- sgn sum_mu [F(xi_i^mu + c_i^mu) - F(-xi_i^mu + c_i^mu)] where
/// c_i^mu = sum_{s containing i} xi_{s\i}^mu S_{s\i}; sgn(0) = +1.
BinaryState modern_update_sync(const BinaryState& state, const PatternSet& patterns, const FunctionalComplex& complex,
                               const InteractionFn& f);

struct TraditionalDynamics {};
struct ModernDynamics {
  InteractionFn f;
};
using Dynamics = std::variant<TraditionalDynamics, ModernDynamics>;

enum class StopReason { EnergyNonDecreasing, MaxSteps };
std::string_view to_string(StopReason r) noexcept;

struct RunOutcome {
  BinaryState final_state;
  std::size_t steps_taken = 0;
  std::vector<double> energy_trace;  // steps_taken + 1 entries
  StopReason stop_reason = StopReason::MaxSteps;
};

inline constexpr std::size_t kDefaultMaxSteps = 100;

/// FirstNonDecrease stops at the first step with E(t) >= E(t-1).
/// Stationary keeps going through transient rises and stops only once E(t) == E(t-1).
enum class StopRule { FirstNonDecrease, Stationary };
std::string_view to_string(StopRule r) noexcept;
StopRule parse_stop_rule(std::string_view name);

/// Repeats the synchronous update until the stop rule fires, returning the
/// state from before the final step, or after `max_steps` updates. The energy of
/// the final step is still recorded. Traditional dynamics ignore `patterns`
/// (the weights already encode them).
RunOutcome run_to_convergence(const BinaryState& initial, const Dynamics& dynamics, const FunctionalComplex& complex,
                              const PatternSet& patterns, std::size_t max_steps = kDefaultMaxSteps,
                              StopRule rule = StopRule::FirstNonDecrease);

}  // namespace shn

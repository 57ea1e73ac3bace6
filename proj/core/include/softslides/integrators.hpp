#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace softbody {

/// The four explicit time steppers behind one interface.
enum class IntegratorKind { ExplicitEuler, Midpoint, Feynman, RK4 };

/// Lower-case wire name: "euler", "midpoint", "feynman", "rk4".
std::string_view to_string(IntegratorKind kind);
/// Inverse of to_string; std::nullopt for unknown names.
std::optional<IntegratorKind> parse_integrator(std::string_view name);

/// Number of derivative evaluations one step of `kind` performs.
int evaluations_per_step(IntegratorKind kind);

/// Flat first-order state. The physics layer packs each particle as
/// [x, y, vx, vy]; scalar test systems use [x, v].
using StateVector = std::vector<double>;

/// Derivative evaluator: writes ds/dt for `state` into `out` (same length).
/// Must be deterministic and must not retain either span.
using DerivFn = std::function<void(std::span<const double> state, std::span<double> out)>;

/// Thrown when a step produces a NaN or infinity.
class NumericFault : public std::runtime_error {
 public:
  NumericFault(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  /// Offending element of the state vector.
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

StateVector euler_step(std::span<const double> state, const DerivFn& f, double h);
StateVector midpoint_step(std::span<const double> state, const DerivFn& f, double h);
StateVector rk4_step(std::span<const double> state, const DerivFn& f, double h);

/// Velocity at the most recent half step, v(t - h/2), one entry per
/// velocity slot of the state.
struct HalfStepMemory {
  std::vector<double> velocity;
  friend bool operator==(const HalfStepMemory&, const HalfStepMemory&) = default;
};

struct FeynmanResult {
  StateVector state;
  HalfStepMemory memory;
};

/// Leapfrog with half-step velocities:
///
///   v(t+h/2) = v(t-h/2) + h a(x(t))
///   x(t+h)   = x(t) + h v(t+h/2)
///
/// With no memory the first half step is bootstrapped as
/// v(h/2) = v(0) + (h/2) a(x(0)). The state is laid out in blocks of
/// `dim` positions followed by `dim` velocities. The velocity written to the
/// returned state is the mean of the two half-step velocities adjacent to
/// x(t), i.e. the synchronized velocity at the start of the step; on the
/// bootstrap call it is v(0). The acceleration is evaluated with the
/// velocity slots holding v(t-h/2) (or v(0) on bootstrap), which only
/// matters for velocity-dependent forces.
FeynmanResult feynman_step(std::span<const double> state, const DerivFn& f, double h,
                           const std::optional<HalfStepMemory>& memory, std::size_t dim = 2);

}  // namespace softbody

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softslides/integrators.hpp"
#include "softslides/physics.hpp"

namespace softbody {

enum class AnalyticSystem { Oscillator, Freefall };

std::optional<AnalyticSystem> parse_system(std::string_view name);
std::string_view to_string(AnalyticSystem system);

/// Initial conditions for the reference problems.
struct AnalyticSetup {
  double stiffness = 1.0;
  double mass = 1.0;
  /// Oscillator: displacement from rest along +x. Freefall: start position.
  Vec2 x0{1.0, 0.0};
  Vec2 v0{0.0, 0.0};
  Vec2 gravity{0.0, -9.81};
};

/// A particle on a spring to a pinned anchor at the origin, displaced
/// `x0.x` from its rest length along +x; gravity off.
World make_oscillator_world(const AnalyticSetup& setup, double timestep);
/// One free particle under constant gravity.
World make_freefall_world(const AnalyticSetup& setup, double timestep);

/// Closed-form position of the moving particle at time t.
Vec2 analytic_position(AnalyticSystem system, const AnalyticSetup& setup, double t);
/// Position of the moving particle in a world built by the factories above.
Vec2 simulated_position(AnalyticSystem system, const World& world);

struct ErrorRow {
  IntegratorKind integrator = IntegratorKind::RK4;
  double timestep = 0.0;
  /// Largest |simulated - analytic| over every step up to the horizon, m.
  double max_error = 0.0;
  /// Informational only.
  double seconds_per_10k_steps = 0.0;
  std::uint64_t derivative_evaluations = 0;
  std::uint64_t steps = 0;
};

/// Integrates `system` to `horizon` seconds for every (integrator, h).
std::vector<ErrorRow> compare_integrators(AnalyticSystem system, std::span<const double> timesteps,
                                          std::span<const IntegratorKind> integrators,
                                          const AnalyticSetup& setup = {}, double horizon = 2.0);

/// Fixed header row, '.' decimal point regardless of locale.
std::string error_table_csv(std::span<const ErrorRow> rows);

/// error[i] / error[i+1] for consecutive entries.
std::vector<double> richardson_ratios(std::span<const double> errors);

/// Parses "h=1/60,1/120,1/240" (the "h=" prefix is optional; decimals
/// allowed). Throws std::invalid_argument.
std::vector<double> parse_step_grid(std::string_view text);

}  // namespace softbody

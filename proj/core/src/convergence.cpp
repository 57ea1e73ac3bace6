#include "softslides/convergence.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "numfmt.hpp"

namespace softbody {

namespace {

// Rest length of the oscillator spring, long enough that the particle never
// reaches the anchor.
constexpr double kOscillatorRest = 2.0;

ViewBox unbounded_box() { return {{-1e6, -1e6}, {1e6, 1e6}}; }

}  // namespace

std::optional<AnalyticSystem> parse_system(std::string_view name) {
  if (name == "oscillator") return AnalyticSystem::Oscillator;
  if (name == "freefall") return AnalyticSystem::Freefall;
  return std::nullopt;
}

std::string_view to_string(AnalyticSystem system) {
  return system == AnalyticSystem::Oscillator ? "oscillator" : "freefall";
}

World make_oscillator_world(const AnalyticSetup& setup, double timestep) {
  SoftBody body;
  body.dimensionality = 1;
  body.material = "oscillator";
  Particle anchor;
  anchor.id = 0;
  anchor.mass = setup.mass;
  anchor.pinned = true;
  Particle bob;
  bob.id = 1;
  bob.mass = setup.mass;
  bob.position = {kOscillatorRest + setup.x0.x, 0.0};
  bob.velocity = {setup.v0.x, 0.0};
  body.particles = {anchor, bob};
  body.springs.push_back(Spring{0, 1, kOscillatorRest, setup.stiffness, 0.0, SpringRole::Structural});

  World world;
  world.bodies.push_back(std::move(body));
  world.params.gravity = {0.0, 0.0};
  world.params.timestep = timestep;
  world.box = unbounded_box();
  return world;
}

World make_freefall_world(const AnalyticSetup& setup, double timestep) {
  // A body needs two particles; the second is a pinned spectator.
  SoftBody body;
  body.dimensionality = 1;
  body.material = "freefall";
  Particle p;
  p.id = 0;
  p.mass = setup.mass;
  p.position = setup.x0;
  p.velocity = setup.v0;
  Particle spectator;
  spectator.id = 1;
  spectator.mass = setup.mass;
  spectator.position = {-1e5, -1e5};
  spectator.pinned = true;
  body.particles = {p, spectator};

  World world;
  world.bodies.push_back(std::move(body));
  world.params.gravity = setup.gravity;
  world.params.timestep = timestep;
  world.box = unbounded_box();
  return world;
}

Vec2 analytic_position(AnalyticSystem system, const AnalyticSetup& setup, double t) {
  if (system == AnalyticSystem::Oscillator) {
    const double omega = std::sqrt(setup.stiffness / setup.mass);
    const double x = setup.x0.x * std::cos(omega * t) + setup.v0.x / omega * std::sin(omega * t);
    return {kOscillatorRest + x, 0.0};
  }
  return setup.x0 + setup.v0 * t + setup.gravity * (0.5 * t * t);
}

Vec2 simulated_position(AnalyticSystem system, const World& world) {
  const auto& particles = world.bodies.front().particles;
  return system == AnalyticSystem::Oscillator ? particles[1].position : particles[0].position;
}

std::vector<ErrorRow> compare_integrators(AnalyticSystem system, std::span<const double> timesteps,
                                          std::span<const IntegratorKind> integrators,
                                          const AnalyticSetup& setup, double horizon) {
  std::vector<ErrorRow> rows;
  for (const IntegratorKind kind : integrators) {
    for (const double h : timesteps) {
      if (!(h > 0.0)) throw std::invalid_argument("timesteps must be positive");
      World world = system == AnalyticSystem::Oscillator ? make_oscillator_world(setup, h)
                                                         : make_freefall_world(setup, h);
      const auto steps = static_cast<std::uint64_t>(std::llround(horizon / h));
      ErrorRow row;
      row.integrator = kind;
      row.timestep = h;
      row.steps = steps;

      const auto start = std::chrono::steady_clock::now();
      for (std::uint64_t n = 1; n <= steps; ++n) {
        step(world, kind);
        const Vec2 exact = analytic_position(system, setup, static_cast<double>(n) * h);
        row.max_error = std::max(row.max_error, length(simulated_position(system, world) - exact));
      }
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      row.seconds_per_10k_steps = steps ? elapsed.count() * 1e4 / static_cast<double>(steps) : 0.0;
      row.derivative_evaluations = world.diagnostics.derivative_evaluations;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string error_table_csv(std::span<const ErrorRow> rows) {
  using softslides::detail::format_double;
  std::string out = "integrator,h,max_error_m,seconds_per_10k_steps,derivative_evaluations\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.integrator)) + ',' + format_double(r.timestep) + ',' +
           format_double(r.max_error) + ',' + format_double(r.seconds_per_10k_steps) + ',' +
           std::to_string(r.derivative_evaluations) + '\n';
  }
  return out;
}

std::vector<double> richardson_ratios(std::span<const double> errors) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) out.push_back(errors[i] / errors[i + 1]);
  return out;
}

std::vector<double> parse_step_grid(std::string_view text) {
  if (text.starts_with("h=")) text.remove_prefix(2);
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    double value = 0.0;
    if (const auto slash = item.find('/'); slash != std::string_view::npos) {
      const auto num = softslides::detail::parse_double(item.substr(0, slash));
      const auto den = softslides::detail::parse_double(item.substr(slash + 1));
      if (!num || !den || *den == 0.0) throw std::invalid_argument("bad step '" + std::string(item) + "'");
      value = *num / *den;
    } else {
      const auto v = softslides::detail::parse_double(item);
      if (!v) throw std::invalid_argument("bad step '" + std::string(item) + "'");
      value = *v;
    }
    if (!(value > 0.0) || !std::isfinite(value)) throw std::invalid_argument("steps must be positive");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty step grid");
  return out;
}

}  // namespace softbody

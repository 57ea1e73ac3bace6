#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softslides/integrators.hpp"
#include "softslides/vec2.hpp"

namespace softbody {

struct Particle {
  std::size_t id = 0;
  Vec2 position;
  Vec2 velocity;
  /// Scratch accumulator, refilled by accumulate_forces.
  Vec2 force;
  double mass = 1.0;
  bool pinned = false;
};

enum class SpringRole { Structural, Radial, Shear };

const char* to_string(SpringRole role);

/// Damped linear spring between particles `a` and `b` of the same body.
struct Spring {
  std::size_t a = 0;
  std::size_t b = 0;
  double rest_length = 0.0;
  double stiffness = 1.0;
  double damping = 0.0;
  SpringRole role = SpringRole::Structural;
};

struct SimParams {
  Vec2 gravity{0.0, -9.81};
  double timestep = 1.0 / 240.0;
  double restitution = 0.5;
  double drag_stiffness = 40.0;
  double drag_damping = 2.0;

  friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct ViewBox {
  Vec2 min{-1.0, -1.0};
  Vec2 max{1.0, 1.0};

  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  friend bool operator==(const ViewBox&, const ViewBox&) = default;
};

struct SoftBody {
  std::vector<Particle> particles;
  std::vector<Spring> springs;
  int dimensionality = 1;
  int layers = 2;
  std::string material;
};

struct DragHandle {
  std::size_t body = 0;
  std::size_t particle = 0;
  Vec2 target;
};

/// Counters that never influence the dynamics.
struct Diagnostics {
  std::uint64_t degenerate_springs = 0;
  std::uint64_t derivative_evaluations = 0;
};

struct World {
  std::vector<SoftBody> bodies;
  SimParams params;
  ViewBox box;
  std::optional<DragHandle> drag;
  std::uint64_t tick = 0;
  /// Leapfrog half-step velocities; present only while the world is being
  /// advanced with the Feynman integrator.
  std::optional<HalfStepMemory> half_step;
  Diagnostics diagnostics;

  std::size_t particle_count() const;
  std::size_t spring_count() const;
};

/// Thrown by validate() for a world that breaks a structural invariant.
class InvalidWorld : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite state after a step. The world is left at its last good state.
class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(std::uint64_t tick, std::size_t body, std::size_t particle);

  /// Tick of the step that failed (the world's tick before the step).
  std::uint64_t tick() const { return tick_; }
  std::size_t body() const { return body_; }
  std::size_t particle() const { return particle_; }

 private:
  std::uint64_t tick_;
  std::size_t body_;
  std::size_t particle_;
};

/// Throws InvalidWorld naming the first violated invariant.
void validate(const World& world);

/// Fills every particle's force with gravity, spring and drag-handle terms.
/// Springs shorter than 1e-9 m contribute nothing for this evaluation and
/// bump diagnostics.degenerate_springs.
void accumulate_forces(World& world);

/// Advances the world by one timestep with `kind`, then applies the view box
/// collision response. Throws SimulationFault on non-finite results.
void step(World& world, IntegratorKind kind);

/// Clamp-and-reflect against the box faces with the world's restitution.
void resolve_viewbox_collision(World& world);

/// Grabs the particle nearest to `pointer` (ties: lowest body, then
/// particle index). Returns false, leaving the world untouched, when there
/// are no particles.
bool begin_drag(World& world, const Vec2& pointer);
/// No-op without an active handle.
void update_drag(World& world, const Vec2& pointer);
void end_drag(World& world);

/// Kinetic energy plus spring potential (gravity excluded).
double mechanical_energy(const World& world);
Vec2 total_momentum(const World& world);

/// Packs/unpacks the world into [x, y, vx, vy] per particle, bodies in order.
StateVector pack_state(const World& world);
void unpack_state(World& world, std::span<const double> state);

/// Derivative evaluator over the world's layout. Evaluations run on a
/// private copy of `world` taken at construction; pinned particles get a
/// zero derivative. `counters`, when given, receives evaluation and
/// degenerate-spring counts.
DerivFn make_derivative(const World& world, Diagnostics* counters = nullptr);

}  // namespace softbody

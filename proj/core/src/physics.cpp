#include "softslides/physics.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace softbody {

namespace {

constexpr double kDegenerateLength = 1e-9;
constexpr std::size_t kStride = 4;

// Spring force on endpoint `a`; the force on `b` is its negation. Returns
// false for a degenerate spring.
bool spring_force(const Spring& s, const Particle& pa, const Particle& pb, Vec2& force_on_a) {
  const Vec2 d = pb.position - pa.position;
  const double len = length(d);
  if (len < kDegenerateLength) {
    force_on_a = {};
    return false;
  }
  const Vec2 dir = d * (1.0 / len);
  const Vec2 rel_v = pb.velocity - pa.velocity;
  const double magnitude = s.stiffness * (len - s.rest_length) + s.damping * dot(rel_v, dir);
  force_on_a = dir * magnitude;
  return true;
}

std::uint64_t accumulate(World& world) {
  std::uint64_t degenerate = 0;
  for (auto& body : world.bodies) {
    for (auto& p : body.particles) p.force = world.params.gravity * p.mass;
    for (const auto& s : body.springs) {
      Particle& pa = body.particles[s.a];
      Particle& pb = body.particles[s.b];
      Vec2 f;
      if (!spring_force(s, pa, pb, f)) {
        ++degenerate;
        continue;
      }
      pa.force += f;
      pb.force -= f;
    }
  }
  if (world.drag) {
    Particle& p = world.bodies[world.drag->body].particles[world.drag->particle];
    p.force += (world.drag->target - p.position) * world.params.drag_stiffness -
               p.velocity * world.params.drag_damping;
  }
  return degenerate;
}

// Reflects one velocity component against a violated face.
void reflect(double& position, double& velocity, double* half_step, double lo, double hi,
             double restitution) {
  if (position < lo) {
    position = lo;
    if (velocity < 0.0) velocity = -velocity * restitution;
    if (half_step && *half_step < 0.0) *half_step = -*half_step * restitution;
  } else if (position > hi) {
    position = hi;
    if (velocity > 0.0) velocity = -velocity * restitution;
    if (half_step && *half_step > 0.0) *half_step = -*half_step * restitution;
  }
}

std::pair<std::size_t, std::size_t> locate(const World& world, std::size_t flat_particle) {
  for (std::size_t b = 0; b < world.bodies.size(); ++b) {
    const std::size_t n = world.bodies[b].particles.size();
    if (flat_particle < n) return {b, flat_particle};
    flat_particle -= n;
  }
  return {world.bodies.size(), flat_particle};
}

}  // namespace

const char* to_string(SpringRole role) {
  switch (role) {
    case SpringRole::Structural: return "structural";
    case SpringRole::Radial: return "radial";
    case SpringRole::Shear: return "shear";
  }
  return "structural";
}

std::size_t World::particle_count() const {
  std::size_t n = 0;
  for (const auto& b : bodies) n += b.particles.size();
  return n;
}

std::size_t World::spring_count() const {
  std::size_t n = 0;
  for (const auto& b : bodies) n += b.springs.size();
  return n;
}

SimulationFault::SimulationFault(std::uint64_t tick, std::size_t body, std::size_t particle)
    : std::runtime_error("non-finite state at tick " + std::to_string(tick) + " (body " +
                         std::to_string(body) + ", particle " + std::to_string(particle) + ")"),
      tick_(tick),
      body_(body),
      particle_(particle) {}

void validate(const World& world) {
  const auto& prm = world.params;
  if (!(prm.timestep > 0.0) || !std::isfinite(prm.timestep)) throw InvalidWorld("timestep must be > 0");
  if (!(prm.restitution >= 0.0 && prm.restitution <= 1.0)) throw InvalidWorld("restitution must be in [0, 1]");
  if (!(prm.drag_stiffness >= 0.0)) throw InvalidWorld("drag stiffness must be >= 0");
  if (!(prm.drag_damping >= 0.0)) throw InvalidWorld("drag damping must be >= 0");
  if (!is_finite(prm.gravity)) throw InvalidWorld("gravity must be finite");
  if (!(world.box.min.x < world.box.max.x && world.box.min.y < world.box.max.y)) {
    throw InvalidWorld("view box min must be below max on both axes");
  }
  for (std::size_t bi = 0; bi < world.bodies.size(); ++bi) {
    const auto& body = world.bodies[bi];
    const std::string where = "body " + std::to_string(bi) + ": ";
    if (body.particles.size() < 2) throw InvalidWorld(where + "needs at least 2 particles");
    if (body.dimensionality < 1 || body.dimensionality > 3) throw InvalidWorld(where + "dimensionality must be 1, 2 or 3");
    if (body.layers < 2 || body.layers > 3) throw InvalidWorld(where + "layers must be 2 or 3");
    for (std::size_t i = 0; i < body.particles.size(); ++i) {
      const auto& p = body.particles[i];
      if (p.id != i) throw InvalidWorld(where + "particle ids must be dense and ordered");
      if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw InvalidWorld(where + "particle mass must be > 0");
      if (!is_finite(p.position) || !is_finite(p.velocity)) throw InvalidWorld(where + "non-finite particle state");
    }
    for (const auto& s : body.springs) {
      if (s.a >= body.particles.size() || s.b >= body.particles.size()) throw InvalidWorld(where + "spring endpoint out of range");
      if (s.a == s.b) throw InvalidWorld(where + "spring endpoints must differ");
      if (!(s.rest_length >= 0.0)) throw InvalidWorld(where + "rest length must be >= 0");
      if (!(s.stiffness > 0.0)) throw InvalidWorld(where + "stiffness must be > 0");
      if (!(s.damping >= 0.0)) throw InvalidWorld(where + "damping must be >= 0");
    }
  }
  if (world.drag) {
    if (world.drag->body >= world.bodies.size() ||
        world.drag->particle >= world.bodies[world.drag->body].particles.size()) {
      throw InvalidWorld("drag handle refers to a missing particle");
    }
  }
}

void accumulate_forces(World& world) {
  world.diagnostics.degenerate_springs += accumulate(world);
}

StateVector pack_state(const World& world) {
  StateVector s;
  s.reserve(world.particle_count() * kStride);
  for (const auto& body : world.bodies) {
    for (const auto& p : body.particles) {
      s.push_back(p.position.x);
      s.push_back(p.position.y);
      s.push_back(p.velocity.x);
      s.push_back(p.velocity.y);
    }
  }
  return s;
}

void unpack_state(World& world, std::span<const double> state) {
  std::size_t i = 0;
  for (auto& body : world.bodies) {
    for (auto& p : body.particles) {
      p.position = {state[i], state[i + 1]};
      p.velocity = {state[i + 2], state[i + 3]};
      i += kStride;
    }
  }
}

DerivFn make_derivative(const World& world, Diagnostics* counters) {
  // The scratch world is shared by copies of the returned function; DerivFn
  // calls are sequential within a step.
  auto scratch = std::make_shared<World>(world);
  scratch->half_step.reset();
  return [scratch, counters](std::span<const double> s, std::span<double> out) {
    unpack_state(*scratch, s);
    const std::uint64_t degenerate = accumulate(*scratch);
    if (counters) {
      ++counters->derivative_evaluations;
      counters->degenerate_springs += degenerate;
    }
    std::size_t i = 0;
    for (const auto& body : scratch->bodies) {
      for (const auto& p : body.particles) {
        if (p.pinned) {
          out[i] = out[i + 1] = out[i + 2] = out[i + 3] = 0.0;
        } else {
          out[i] = p.velocity.x;
          out[i + 1] = p.velocity.y;
          out[i + 2] = p.force.x / p.mass;
          out[i + 3] = p.force.y / p.mass;
        }
        i += kStride;
      }
    }
  };
}

void step(World& world, IntegratorKind kind) {
  const double h = world.params.timestep;
  const StateVector s = pack_state(world);
  Diagnostics counters = world.diagnostics;
  const DerivFn f = make_derivative(world, &counters);

  StateVector next;
  std::optional<HalfStepMemory> memory;
  try {
    switch (kind) {
      case IntegratorKind::ExplicitEuler: next = euler_step(s, f, h); break;
      case IntegratorKind::Midpoint: next = midpoint_step(s, f, h); break;
      case IntegratorKind::RK4: next = rk4_step(s, f, h); break;
      case IntegratorKind::Feynman: {
        auto r = feynman_step(s, f, h, world.half_step, 2);
        next = std::move(r.state);
        memory = std::move(r.memory);
        break;
      }
    }
  } catch (const NumericFault& fault) {
    const auto [b, p] = locate(world, fault.index() / kStride);
    throw SimulationFault(world.tick, b, p);
  }

  unpack_state(world, next);
  std::size_t flat = 0;
  for (auto& body : world.bodies) {
    for (auto& p : body.particles) {
      if (p.pinned) {
        p.velocity = {};
        if (memory) memory->velocity[2 * flat] = memory->velocity[2 * flat + 1] = 0.0;
      }
      ++flat;
    }
  }
  world.half_step = std::move(memory);
  world.diagnostics = counters;
  resolve_viewbox_collision(world);
  ++world.tick;
}

void resolve_viewbox_collision(World& world) {
  const ViewBox& box = world.box;
  const double e = world.params.restitution;
  std::size_t flat = 0;
  for (auto& body : world.bodies) {
    for (auto& p : body.particles) {
      double* hx = world.half_step ? &world.half_step->velocity[2 * flat] : nullptr;
      double* hy = world.half_step ? &world.half_step->velocity[2 * flat + 1] : nullptr;
      reflect(p.position.x, p.velocity.x, hx, box.min.x, box.max.x, e);
      reflect(p.position.y, p.velocity.y, hy, box.min.y, box.max.y, e);
      ++flat;
    }
  }
}

bool begin_drag(World& world, const Vec2& pointer) {
  std::optional<DragHandle> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < world.bodies.size(); ++b) {
    const auto& particles = world.bodies[b].particles;
    for (std::size_t i = 0; i < particles.size(); ++i) {
      const double d2 = length_squared(particles[i].position - pointer);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = DragHandle{b, i, pointer};
      }
    }
  }
  if (!best) return false;
  world.drag = best;
  return true;
}

void update_drag(World& world, const Vec2& pointer) {
  if (world.drag) world.drag->target = pointer;
}

void end_drag(World& world) { world.drag.reset(); }

double mechanical_energy(const World& world) {
  double e = 0.0;
  for (const auto& body : world.bodies) {
    for (const auto& p : body.particles) e += 0.5 * p.mass * length_squared(p.velocity);
    for (const auto& s : body.springs) {
      const double stretch =
          length(body.particles[s.b].position - body.particles[s.a].position) - s.rest_length;
      e += 0.5 * s.stiffness * stretch * stretch;
    }
  }
  return e;
}

Vec2 total_momentum(const World& world) {
  Vec2 m;
  for (const auto& body : world.bodies) {
    for (const auto& p : body.particles) m += p.velocity * p.mass;
  }
  return m;
}

}  // namespace softbody

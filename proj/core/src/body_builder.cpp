#include "softslides/body_builder.hpp"

#include <cmath>
#include <numbers>

namespace softbody {

namespace {

void check_common(const LodConfig& cfg) {
  if (!(cfg.particle_mass > 0.0) || !std::isfinite(cfg.particle_mass)) {
    throw InvalidConfig("particle_mass", "must be > 0");
  }
  if (!(cfg.k_structural > 0.0)) throw InvalidConfig("k_structural", "must be > 0");
  if (!(cfg.k_radial > 0.0)) throw InvalidConfig("k_radial", "must be > 0");
  if (!(cfg.k_shear > 0.0)) throw InvalidConfig("k_shear", "must be > 0");
  if (!(cfg.damping >= 0.0) || !std::isfinite(cfg.damping)) throw InvalidConfig("damping", "must be >= 0");
  if (!is_finite(cfg.center)) throw InvalidConfig("center", "must be finite");
}

void check_rings(const LodConfig& cfg) {
  check_common(cfg);
  if (cfg.resolution < 3) throw InvalidConfig("resolution", "rings need at least 3 particles");
  if (cfg.layers != 2 && cfg.layers != 3) throw InvalidConfig("layers", "must be 2 or 3");
  if (!(cfg.layer_gap > 0.0)) throw InvalidConfig("layer_gap", "must be > 0");
  if (!(cfg.radius > cfg.layer_gap * (cfg.layers - 1)) || !std::isfinite(cfg.radius)) {
    throw InvalidConfig("radius", "inner rings would have non-positive radius");
  }
}

Particle make_particle(std::size_t id, Vec2 position, const LodConfig& cfg) {
  Particle p;
  p.id = id;
  p.position = position;
  p.mass = cfg.particle_mass;
  return p;
}

void link(SoftBody& body, std::size_t a, std::size_t b, double k, double c, SpringRole role) {
  Spring s;
  s.a = a;
  s.b = b;
  s.rest_length = length(body.particles[b].position - body.particles[a].position);
  s.stiffness = k;
  s.damping = c;
  s.role = role;
  body.springs.push_back(s);
}

// Ring offsets measured clockwise from the top. The right half is mirrored
// onto the left so the ring is exactly symmetric about the vertical axis.
std::vector<Vec2> ring_offsets(int n, double radius) {
  std::vector<Vec2> out(static_cast<std::size_t>(n));
  for (int i = 0; i <= n / 2; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / n;
    double x = radius * std::sin(phi);
    if (2 * i == n || i == 0) x = 0.0;
    out[static_cast<std::size_t>(i)] = {x, radius * std::cos(phi)};
  }
  for (int i = n / 2 + 1; i < n; ++i) {
    const Vec2 m = out[static_cast<std::size_t>(n - i)];
    out[static_cast<std::size_t>(i)] = {-m.x, m.y};
  }
  return out;
}

SoftBody build_rings(const LodConfig& cfg, int dimensionality) {
  const auto n = static_cast<std::size_t>(cfg.resolution);
  const auto layers = static_cast<std::size_t>(cfg.layers);

  SoftBody body;
  body.dimensionality = dimensionality;
  body.layers = cfg.layers;
  body.material = cfg.material;
  body.particles.reserve(n * layers);

  // Ring 0 is the outermost.
  for (std::size_t ring = 0; ring < layers; ++ring) {
    const double radius = cfg.radius - cfg.layer_gap * static_cast<double>(ring);
    for (const Vec2& off : ring_offsets(cfg.resolution, radius)) {
      body.particles.push_back(make_particle(body.particles.size(), cfg.center + off, cfg));
    }
  }

  auto at = [n](std::size_t ring, std::size_t i) { return ring * n + i % n; };
  for (std::size_t ring = 0; ring < layers; ++ring) {
    for (std::size_t i = 0; i < n; ++i) {
      link(body, at(ring, i), at(ring, i + 1), cfg.k_structural, cfg.damping, SpringRole::Structural);
    }
  }
  for (std::size_t ring = 0; ring + 1 < layers; ++ring) {
    for (std::size_t i = 0; i < n; ++i) {
      link(body, at(ring, i), at(ring + 1, i), cfg.k_radial, cfg.damping, SpringRole::Radial);
    }
    for (std::size_t i = 0; i < n; ++i) {
      link(body, at(ring, i), at(ring + 1, i + 1), cfg.k_shear, cfg.damping, SpringRole::Shear);
      link(body, at(ring, i), at(ring + 1, i + n - 1), cfg.k_shear, cfg.damping, SpringRole::Shear);
    }
  }
  return body;
}

}  // namespace

SoftBody build_1d(const LodConfig& cfg) {
  check_common(cfg);
  if (cfg.resolution < 2) throw InvalidConfig("resolution", "a chain needs at least 2 particles");
  if (!(cfg.spacing > 0.0) || !std::isfinite(cfg.spacing)) throw InvalidConfig("spacing", "must be > 0");

  const auto n = static_cast<std::size_t>(cfg.resolution);
  SoftBody body;
  body.dimensionality = 1;
  body.layers = 2;
  body.material = cfg.material;
  body.particles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Symmetric about the center: offsets i - (n-1)/2 and its mirror agree
    // bit for bit.
    const double offset = (2.0 * static_cast<double>(i) - static_cast<double>(n - 1)) * 0.5 * cfg.spacing;
    body.particles.push_back(make_particle(i, cfg.center + Vec2{offset, 0.0}, cfg));
  }
  if (cfg.pin_ends) {
    body.particles.front().pinned = true;
    body.particles.back().pinned = true;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    link(body, i, i + 1, cfg.k_structural, cfg.damping, SpringRole::Structural);
  }
  return body;
}

SoftBody build_2d(const LodConfig& cfg) {
  check_rings(cfg);
  return build_rings(cfg, 2);
}

SoftBody build_3d(const LodConfig& cfg) {
  check_rings(cfg);
  if (cfg.resolution % 2 != 0) throw InvalidConfig("resolution", "must be even for antipodal bracing");
  SoftBody body = build_rings(cfg, 3);
  const auto n = static_cast<std::size_t>(cfg.resolution);
  for (std::size_t ring = 0; ring < static_cast<std::size_t>(cfg.layers); ++ring) {
    for (std::size_t i = 0; i < n / 2; ++i) {
      link(body, ring * n + i, ring * n + i + n / 2, cfg.k_structural, cfg.damping,
           SpringRole::Structural);
    }
  }
  return body;
}

SoftBody build_body(const LodConfig& cfg) {
  switch (cfg.dimensionality) {
    case 1: return build_1d(cfg);
    case 2: return build_2d(cfg);
    case 3: return build_3d(cfg);
    default: throw InvalidConfig("dimensionality", "must be 1, 2 or 3");
  }
}

BodySpec describe(const SoftBody& body) {
  BodySpec spec;
  spec.particle_count = body.particles.size();
  for (const auto& s : body.springs) ++spec.spring_count_by_role[static_cast<std::size_t>(s.role)];
  spec.dimensionality = body.dimensionality;
  spec.layers = body.layers;
  return spec;
}

BodySpec expected_spec(const LodConfig& cfg) {
  BodySpec spec;
  const auto n = static_cast<std::size_t>(cfg.resolution);
  spec.dimensionality = cfg.dimensionality;
  if (cfg.dimensionality == 1) {
    spec.layers = 2;
    spec.particle_count = n;
    spec.spring_count_by_role[0] = n - 1;
    return spec;
  }
  const auto layers = static_cast<std::size_t>(cfg.layers);
  spec.layers = cfg.layers;
  spec.particle_count = layers * n;
  spec.spring_count_by_role[0] = layers * n + (cfg.dimensionality == 3 ? layers * (n / 2) : 0);
  spec.spring_count_by_role[1] = (layers - 1) * n;
  spec.spring_count_by_role[2] = (layers - 1) * 2 * n;
  return spec;
}

}  // namespace softbody

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "softslides/physics.hpp"

namespace softbody {

/// Level-of-detail parameters for one layered body.
struct LodConfig {
  int dimensionality = 2;
  /// Ignored for 1D chains.
  int layers = 2;
  /// Particles per ring (2D/3D) or chain length (1D).
  int resolution = 12;
  /// Outer ring radius, m.
  double radius = 0.4;
  double layer_gap = 0.15;
  /// Chain spacing for 1D, m.
  double spacing = 0.1;
  double particle_mass = 0.05;
  double k_structural = 60.0;
  double k_radial = 40.0;
  double k_shear = 30.0;
  double damping = 0.4;
  Vec2 center;
  bool pin_ends = true;
  std::string material = "elastic";

  friend bool operator==(const LodConfig&, const LodConfig&) = default;
};

/// Thrown for a configuration that cannot produce a body; field() names the
/// offending LodConfig member.
class InvalidConfig : public std::invalid_argument {
 public:
  InvalidConfig(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct BodySpec {
  std::size_t particle_count = 0;
  /// Indexed by SpringRole.
  std::array<std::size_t, 3> spring_count_by_role{};
  int dimensionality = 0;
  int layers = 0;

  std::size_t spring_count() const {
    return spring_count_by_role[0] + spring_count_by_role[1] + spring_count_by_role[2];
  }
  friend bool operator==(const BodySpec&, const BodySpec&) = default;
};

/// Chain of `resolution` particles centered on cfg.center, `spacing` apart.
SoftBody build_1d(const LodConfig& cfg);
/// Concentric rings, radial and shear links between adjacent rings.
SoftBody build_2d(const LodConfig& cfg);
/// The 2D construction plus antipodal cross-braces on every ring.
SoftBody build_3d(const LodConfig& cfg);
/// Dispatches on cfg.dimensionality.
SoftBody build_body(const LodConfig& cfg);

/// Counts read off a built body.
BodySpec describe(const SoftBody& body);
/// Counts the construction rules predict for `cfg` (no body is built).
BodySpec expected_spec(const LodConfig& cfg);

}  // namespace softbody

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "softslides/body_builder.hpp"
#include "softslides/presentation.hpp"

namespace slides {

// Deck files are UTF-8, one directive per line; '#' starts a comment line.
//
//   slide <id> <text|sim>
//   title: <text>
//   tidget: <top_left|top_right|bottom_left|bottom_right>
//   bullet: <text>
//   integrator: <euler|midpoint|feynman|rk4>        (sim only)
//   substeps: <int>                                  (sim only)
//   viewbox: <min_x> <min_y> <max_x> <max_y>         (sim only)
//   params: gravity=<x>,<y> timestep=<h> restitution=<e>
//           drag_stiffness=<k> drag_damping=<c>      (sim only)
//   body: <1d|2d|3d> key=value ...                   (sim only)
//
// Bullets before any tidget line go to an implicit top_left tidget. Body
// keys: n layers radius layer_gap spacing mass k_structural k_radial k_shear
// damping center=<x>,<y> pin_ends=<true|false> material. Numbers may be
// written as fractions (1/240). Unknown directives and keys are errors.

enum class SlideKind { Text, Sim };

struct TidgetDecl {
  Anchor anchor = Anchor::TopLeft;
  std::vector<std::string> lines;
  friend bool operator==(const TidgetDecl&, const TidgetDecl&) = default;
};

struct SlideDecl {
  std::string id;
  SlideKind kind = SlideKind::Text;
  std::string title;
  std::vector<TidgetDecl> tidgets;
  softbody::IntegratorKind integrator = softbody::IntegratorKind::RK4;
  int substeps = 4;
  softbody::ViewBox viewbox{{-2.0, -1.5}, {2.0, 1.5}};
  softbody::SimParams params;
  std::vector<softbody::LodConfig> bodies;

  friend bool operator==(const SlideDecl&, const SlideDecl&) = default;
};

struct DeckFile {
  std::vector<SlideDecl> slides;
  friend bool operator==(const DeckFile&, const DeckFile&) = default;
};

/// Parse or validation failure. line() is 1-based (0 when the problem is not
/// tied to a line); field() names the directive or key.
class DeckError : public std::runtime_error {
 public:
  DeckError(std::size_t line, std::string field, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

DeckFile parse_deck(std::string_view text);
std::string serialize_deck(const DeckFile& deck);
/// Builds every slide's initial scene. Throws DeckError for invalid bodies
/// or duplicate ids.
Presentation build_presentation(const DeckFile& deck);

std::string read_deck_text(const std::filesystem::path& path);
Presentation load_deck(const std::filesystem::path& path);

/// The shipped 15-slide teaching deck, compiled in.
std::string_view default_deck_text();
Presentation default_deck();

/// 64-bit FNV-1a over the raw deck bytes.
std::uint64_t deck_hash(std::string_view text);

}  // namespace slides

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "softslides/integrators.hpp"
#include "softslides/physics.hpp"

namespace slides {

enum class Anchor { TopLeft, TopRight, BottomLeft, BottomRight };

std::string_view to_string(Anchor anchor);
std::optional<Anchor> parse_anchor(std::string_view name);

/// Bulleted text widget. Lines are revealed one at a time.
struct Tidget {
  std::vector<std::string> lines;
  Anchor anchor = Anchor::TopLeft;
  bool visible = true;
  std::size_t reveal_index = 0;

  friend bool operator==(const Tidget&, const Tidget&) = default;
};

/// Live physics attached to a slide.
struct SimScene {
  softbody::World world;
  softbody::IntegratorKind integrator = softbody::IntegratorKind::RK4;
  bool running = true;
  int substeps_per_tick = 4;
  /// Set when a step produced non-finite state; the scene is paused.
  std::optional<std::string> fault;
};

/// Keyboard key. Printable keys carry their character; the named keys use
/// the reserved codes below.
struct Key {
  static constexpr std::uint32_t kSpace = ' ';
  static constexpr std::uint32_t kPageUp = 0x110000;
  static constexpr std::uint32_t kPageDown = 0x110001;
  static constexpr std::uint32_t kHome = 0x110002;
  static constexpr std::uint32_t kEnd = 0x110003;

  std::uint32_t code = 0;

  static constexpr Key character(char c) { return Key{static_cast<unsigned char>(c)}; }
  friend constexpr bool operator==(const Key&, const Key&) = default;
};

/// Wire name: "space", "pageup", "pagedown", "home", "end", or the single
/// printable ASCII character.
std::string key_name(Key key);
std::optional<Key> parse_key(std::string_view name);

struct Slide;

/// Returns true when the key was consumed and default handling must be
/// skipped.
using KeyHandler = std::function<bool(Slide&, Key)>;

struct Slide {
  std::string id;
  std::string title;
  std::vector<Tidget> tidgets;
  /// Declared initial scene. The live copy is rebuilt from it on entry and
  /// on reset.
  std::optional<SimScene> initial_scene;
  std::optional<SimScene> scene;
  KeyHandler on_key;
};

struct NavNext {};
struct NavPrev {};
struct NavHome {};
struct NavEnd {};
struct NavGoto {
  std::size_t index = 0;
};
using NavCommand = std::variant<NavNext, NavPrev, NavHome, NavEnd, NavGoto>;

struct KeyEvent {
  Key key;
};
struct PointerDown {
  softbody::Vec2 position;
};
struct PointerMove {
  softbody::Vec2 position;
};
struct PointerUp {};
struct TickEvent {
  /// Informational; stepping always uses the world's fixed timestep.
  double dt = 1.0 / 60.0;
};
using InputEvent = std::variant<KeyEvent, PointerDown, PointerMove, PointerUp, TickEvent>;

class BuildError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NavigationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class Presentation;

class PresentationBuilder {
 public:
  /// Throws BuildError on a duplicate slide id.
  PresentationBuilder& add_slide(Slide slide);
  /// Throws BuildError when no slides were added.
  Presentation finish() &&;

 private:
  std::vector<Slide> slides_;
};

/// Ordered slides with a current position and the default key map:
///
///   Space, PageDown   next slide        PageUp   previous slide
///   Home, End         first/last slide  t        toggle tidgets
///   b                 reveal next bullet r        reset scene
///   1 2 3 4           Euler, Midpoint, Feynman, RK4
///   p                 pause/run the scene
///
/// A slide's on_key handler sees every key first.
class Presentation {
 public:
  const std::vector<Slide>& slides() const { return slides_; }
  std::size_t size() const { return slides_.size(); }
  std::size_t current_index() const { return current_; }
  const Slide& current() const { return slides_[current_]; }
  Slide& current() { return slides_[current_]; }
  bool tidgets_enabled() const { return tidgets_enabled_; }

  /// Next/Prev clamp at the ends. Goto out of range throws NavigationError.
  void navigate(const NavCommand& cmd);
  /// Total: never throws, whatever the event.
  void dispatch(const InputEvent& event);

  /// Restores the current slide's scene to its declared initial state.
  void reset_scene();
  void set_integrator(softbody::IntegratorKind kind);
  void set_running(bool running);
  void toggle_tidgets() { tidgets_enabled_ = !tidgets_enabled_; }
  void reveal_next_bullet();
  /// Advances a running scene by substeps_per_tick fixed steps.
  void advance_scene();

 private:
  friend class PresentationBuilder;
  explicit Presentation(std::vector<Slide> slides);

  void enter(std::size_t index);
  void handle_key(Key key);

  std::vector<Slide> slides_;
  std::size_t current_ = 0;
  bool tidgets_enabled_ = true;
};

}  // namespace slides

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "softslides/presentation.hpp"
#include "softslides/vec2.hpp"

namespace slides::protocol {

struct TidgetView {
  Anchor anchor = Anchor::TopLeft;
  /// Revealed lines only.
  std::vector<std::string> lines;
  friend bool operator==(const TidgetView&, const TidgetView&) = default;
};

struct BodyView {
  std::vector<softbody::Vec2> positions;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> springs;
  /// Current length over rest length, one per spring (1 for zero rest length).
  std::vector<double> ratios;
  friend bool operator==(const BodyView&, const BodyView&) = default;
};

struct DragView {
  std::uint32_t body = 0;
  std::uint32_t particle = 0;
  softbody::Vec2 target;
  friend bool operator==(const DragView&, const DragView&) = default;
};

/// Everything a front end needs to draw one tick.
struct FrameSnapshot {
  std::uint64_t tick = 0;
  std::uint32_t slide_index = 0;
  std::string slide_title;
  /// Empty integrator name on slides without a scene.
  std::string integrator;
  bool running = false;
  /// Only tidgets that are enabled and visible.
  std::vector<TidgetView> tidgets;
  std::vector<BodyView> bodies;
  std::optional<DragView> drag;

  friend bool operator==(const FrameSnapshot&, const FrameSnapshot&) = default;
};

/// Malformed or non-canonical frame bytes.
class FrameDecodeError : public std::runtime_error {
 public:
  FrameDecodeError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

FrameSnapshot make_snapshot(const Presentation& presentation, std::uint64_t tick);

/// Canonical JSON text: fixed key order, no whitespace, shortest
/// round-trip decimals, minimal string escapes.
std::string encode_frame(const FrameSnapshot& snapshot);
/// Accepts canonical bytes only, so encode_frame(decode_frame(b)) == b.
FrameSnapshot decode_frame(std::string_view bytes);

/// JSON string literal with the canonical escape set.
std::string quote(std::string_view text);

}  // namespace slides::protocol

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "softslides/deck.hpp"
#include "softslides/framing.hpp"
#include "softslides/session.hpp"

namespace slides::harness {

/// First record of every trace: what produced it.
struct TraceHeader {
  std::uint64_t deck_hash = 0;
  std::string slide_id;
  std::uint32_t slide_index = 0;
  /// Empty for slides without a simulation.
  std::string integrator;
  double timestep = 0.0;
  int substeps = 0;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

std::string encode_header(const TraceHeader& header);

/// Header describing `session`'s current slide for a deck with `deck_hash`.
TraceHeader describe(const protocol::Session& session, std::uint64_t deck_hash);

/// Accepts an index ("4") or a slide id ("sim2d"). Throws DeckError naming
/// the selector when nothing matches.
std::size_t resolve_slide(const Presentation& presentation, std::string_view selector);

/// Opens a session on `selector`'s slide of the parsed deck.
protocol::Session open_session(std::string_view deck_text, std::string_view selector);

/// Appends framed records; the result is the trace file's bytes.
class TraceRecorder {
 public:
  explicit TraceRecorder(const TraceHeader& header);
  void record(const protocol::Message& message);
  void frame(const protocol::FrameSnapshot& snapshot);
  void command(std::string_view payload);
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

/// Runs `ticks` ticks and returns trace bytes holding ticks + 1 frames.
std::string run_trace(std::string_view deck_text, std::string_view selector, std::uint64_t ticks);

struct VerifyResult {
  bool ok = false;
  /// First tick whose recorded frame does not match the re-simulation.
  std::optional<std::uint64_t> divergent_tick;
  std::uint64_t frames_checked = 0;
  std::string message;
};

/// Replays the trace against the deck: re-applies recorded commands at their
/// positions and compares every frame byte for byte. Header problems,
/// including a different deck, diverge at tick 0.
VerifyResult verify_trace(std::string_view trace_bytes, std::string_view deck_text);

}  // namespace slides::harness

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "softslides/command.hpp"
#include "softslides/frame.hpp"
#include "softslides/presentation.hpp"

namespace slides::protocol {

/// Single-writer owner of a presentation: commands are applied between
/// ticks, and each tick yields exactly one snapshot.
class Session {
 public:
  explicit Session(Presentation presentation);

  /// Applies a command. Returns an error message when it is rejected; the
  /// presentation is unchanged in that case.
  std::optional<std::string> apply(const Command& command);
  /// Decodes then applies. Malformed bytes produce an error message.
  std::optional<std::string> apply_encoded(std::string_view payload);

  /// Snapshot at the current tick (no stepping).
  FrameSnapshot snapshot() const;
  /// Advances one rendered tick and returns its snapshot.
  FrameSnapshot advance();

  std::uint64_t tick() const { return tick_; }
  const Presentation& presentation() const { return presentation_; }
  Presentation& presentation() { return presentation_; }

 private:
  std::optional<std::string> set_param(const SetParamCmd& cmd);

  Presentation presentation_;
  std::uint64_t tick_ = 0;
};

}  // namespace slides::protocol

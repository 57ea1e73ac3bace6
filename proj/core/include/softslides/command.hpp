#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "softslides/integrators.hpp"
#include "softslides/presentation.hpp"
#include "softslides/vec2.hpp"

namespace slides::protocol {

struct NavigateCmd {
  NavCommand nav;
};
struct KeyCmd {
  Key key;
};
struct PointerDownCmd {
  softbody::Vec2 position;
};
struct PointerMoveCmd {
  softbody::Vec2 position;
};
struct PointerUpCmd {};
struct SetIntegratorCmd {
  softbody::IntegratorKind kind = softbody::IntegratorKind::RK4;
};
struct SetParamCmd {
  std::string path;
  double value = 0.0;
};
struct ResetCmd {};
struct PauseCmd {};
struct RunCmd {};

/// Front end to core messages.
using Command = std::variant<NavigateCmd, KeyCmd, PointerDownCmd, PointerMoveCmd, PointerUpCmd,
                             SetIntegratorCmd, SetParamCmd, ResetCmd, PauseCmd, RunCmd>;

/// One tweakable scene parameter and its legal closed range.
struct ParamSpec {
  std::string_view path;
  double min;
  double max;
  bool integer;
};

/// Every path SetParam accepts. Stiffness and damping paths apply to all
/// springs of the scene (stiffness.<role> to that role only).
std::span<const ParamSpec> param_specs();
const ParamSpec* find_param(std::string_view path);

class CommandDecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical JSON object, e.g. {"type":"set_integrator","name":"rk4"}.
std::string encode_command(const Command& command);
/// Accepts any key order and whitespace; unknown types, names, extra or
/// missing fields are rejected.
Command decode_command(std::string_view bytes);

}  // namespace slides::protocol

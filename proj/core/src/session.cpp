#include "softslides/session.hpp"

#include <cmath>

#include "numfmt.hpp"

namespace slides::protocol {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void set_role_stiffness(softbody::World& world, softbody::SpringRole role, double k) {
  for (auto& body : world.bodies) {
    for (auto& s : body.springs) {
      if (s.role == role) s.stiffness = k;
    }
  }
}

}  // namespace

Session::Session(Presentation presentation) : presentation_(std::move(presentation)) {}

std::optional<std::string> Session::set_param(const SetParamCmd& cmd) {
  const ParamSpec* spec = find_param(cmd.path);
  if (!spec) return "unknown parameter '" + cmd.path + "'";
  if (!std::isfinite(cmd.value) || cmd.value < spec->min || cmd.value > spec->max) {
    return "value " + softslides::detail::format_double(cmd.value) + " for '" + cmd.path + "' outside [" +
           softslides::detail::format_double(spec->min) + ", " + softslides::detail::format_double(spec->max) + "]";
  }
  if (spec->integer && cmd.value != std::floor(cmd.value)) return "'" + cmd.path + "' must be an integer";

  auto& scene = presentation_.current().scene;
  if (!scene) return "current slide has no simulation";
  auto& world = scene->world;
  auto& params = world.params;
  const std::string_view path = cmd.path;
  if (path == "gravity.x") params.gravity.x = cmd.value;
  else if (path == "gravity.y") params.gravity.y = cmd.value;
  else if (path == "timestep") {
    params.timestep = cmd.value;
    world.half_step.reset();
  } else if (path == "restitution") params.restitution = cmd.value;
  else if (path == "drag_stiffness") params.drag_stiffness = cmd.value;
  else if (path == "drag_damping") params.drag_damping = cmd.value;
  else if (path == "stiffness.structural") set_role_stiffness(world, softbody::SpringRole::Structural, cmd.value);
  else if (path == "stiffness.radial") set_role_stiffness(world, softbody::SpringRole::Radial, cmd.value);
  else if (path == "stiffness.shear") set_role_stiffness(world, softbody::SpringRole::Shear, cmd.value);
  else if (path == "damping") {
    for (auto& body : world.bodies) {
      for (auto& s : body.springs) s.damping = cmd.value;
    }
  } else if (path == "substeps") scene->substeps_per_tick = static_cast<int>(cmd.value);
  return std::nullopt;
}

std::optional<std::string> Session::apply(const Command& command) {
  return std::visit(
      Overloaded{
          [&](const NavigateCmd& c) -> std::optional<std::string> {
            try {
              presentation_.navigate(c.nav);
            } catch (const NavigationError& e) {
              return std::string(e.what());
            }
            return std::nullopt;
          },
          [&](const KeyCmd& c) -> std::optional<std::string> {
            presentation_.dispatch(KeyEvent{c.key});
            return std::nullopt;
          },
          [&](const PointerDownCmd& c) -> std::optional<std::string> {
            presentation_.dispatch(PointerDown{c.position});
            return std::nullopt;
          },
          [&](const PointerMoveCmd& c) -> std::optional<std::string> {
            presentation_.dispatch(PointerMove{c.position});
            return std::nullopt;
          },
          [&](const PointerUpCmd&) -> std::optional<std::string> {
            presentation_.dispatch(PointerUp{});
            return std::nullopt;
          },
          [&](const SetIntegratorCmd& c) -> std::optional<std::string> {
            presentation_.set_integrator(c.kind);
            return std::nullopt;
          },
          [&](const SetParamCmd& c) { return set_param(c); },
          [&](const ResetCmd&) -> std::optional<std::string> {
            presentation_.reset_scene();
            return std::nullopt;
          },
          [&](const PauseCmd&) -> std::optional<std::string> {
            presentation_.set_running(false);
            return std::nullopt;
          },
          [&](const RunCmd&) -> std::optional<std::string> {
            presentation_.set_running(true);
            return std::nullopt;
          },
      },
      command);
}

std::optional<std::string> Session::apply_encoded(std::string_view payload) {
  Command command;
  try {
    command = decode_command(payload);
  } catch (const CommandDecodeError& e) {
    return std::string(e.what());
  }
  return apply(command);
}

FrameSnapshot Session::snapshot() const { return make_snapshot(presentation_, tick_); }

FrameSnapshot Session::advance() {
  presentation_.dispatch(TickEvent{});
  ++tick_;
  return snapshot();
}

}  // namespace slides::protocol

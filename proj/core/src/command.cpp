#include "softslides/command.hpp"

#include <array>
#include <cmath>

#include <json.hpp>

#include "numfmt.hpp"
#include "softslides/frame.hpp"

namespace slides::protocol {

namespace {

using softslides::detail::format_double;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::array kParams{
    ParamSpec{"gravity.x", -50.0, 50.0, false},
    ParamSpec{"gravity.y", -50.0, 50.0, false},
    ParamSpec{"timestep", 1.0 / 4000.0, 1.0 / 60.0, false},
    ParamSpec{"restitution", 0.0, 1.0, false},
    ParamSpec{"drag_stiffness", 0.0, 1000.0, false},
    ParamSpec{"drag_damping", 0.0, 100.0, false},
    ParamSpec{"stiffness.structural", 1.0, 1000.0, false},
    ParamSpec{"stiffness.radial", 1.0, 1000.0, false},
    ParamSpec{"stiffness.shear", 1.0, 1000.0, false},
    ParamSpec{"damping", 0.0, 20.0, false},
    ParamSpec{"substeps", 1.0, 64.0, true},
};

std::string point(std::string_view type, const softbody::Vec2& p) {
  return "{\"type\":\"" + std::string(type) + "\",\"x\":" + format_double(p.x) + ",\"y\":" + format_double(p.y) + "}";
}

std::string nav_target(const NavCommand& nav) {
  return std::visit(Overloaded{
                        [](NavNext) -> std::string { return "\"next\""; },
                        [](NavPrev) -> std::string { return "\"prev\""; },
                        [](NavHome) -> std::string { return "\"home\""; },
                        [](NavEnd) -> std::string { return "\"end\""; },
                        [](NavGoto g) { return "\"goto\",\"index\":" + std::to_string(g.index); },
                    },
                    nav);
}

using Json = nlohmann::json;

void require_fields(const Json& j, std::initializer_list<std::string_view> fields) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const auto f : fields) known = known || it.key() == f;
    if (!known) throw CommandDecodeError("unexpected field '" + it.key() + "'");
  }
  for (const auto f : fields) {
    if (!j.contains(f)) throw CommandDecodeError("missing field '" + std::string(f) + "'");
  }
}

double real_field(const Json& j, const char* name) {
  const Json& v = j.at(name);
  if (!v.is_number()) throw CommandDecodeError(std::string("field '") + name + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw CommandDecodeError(std::string("field '") + name + "' must be finite");
  return d;
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = j.at(name);
  if (!v.is_string()) throw CommandDecodeError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::span<const ParamSpec> param_specs() { return kParams; }

const ParamSpec* find_param(std::string_view path) {
  for (const auto& p : kParams) {
    if (p.path == path) return &p;
  }
  return nullptr;
}

std::string encode_command(const Command& command) {
  return std::visit(
      Overloaded{
          [](const NavigateCmd& c) { return "{\"type\":\"navigate\",\"to\":" + nav_target(c.nav) + "}"; },
          [](const KeyCmd& c) { return "{\"type\":\"key\",\"key\":" + quote(key_name(c.key)) + "}"; },
          [](const PointerDownCmd& c) { return point("pointer_down", c.position); },
          [](const PointerMoveCmd& c) { return point("pointer_move", c.position); },
          [](const PointerUpCmd&) { return std::string("{\"type\":\"pointer_up\"}"); },
          [](const SetIntegratorCmd& c) {
            return "{\"type\":\"set_integrator\",\"name\":" + quote(softbody::to_string(c.kind)) + "}";
          },
          [](const SetParamCmd& c) {
            return "{\"type\":\"set_param\",\"path\":" + quote(c.path) + ",\"value\":" + format_double(c.value) + "}";
          },
          [](const ResetCmd&) { return std::string("{\"type\":\"reset\"}"); },
          [](const PauseCmd&) { return std::string("{\"type\":\"pause\"}"); },
          [](const RunCmd&) { return std::string("{\"type\":\"run\"}"); },
      },
      command);
}

Command decode_command(std::string_view bytes) {
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw CommandDecodeError(std::string("malformed command: ") + e.what());
  }
  if (!j.is_object()) throw CommandDecodeError("command must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) throw CommandDecodeError("command needs a string 'type'");
  const std::string type = j["type"].get<std::string>();

  if (type == "navigate") {
    const std::string to = j.contains("to") && j["to"].is_string() ? j["to"].get<std::string>() : "";
    if (to == "goto") {
      require_fields(j, {"type", "to", "index"});
      const Json& idx = j["index"];
      if (!idx.is_number_unsigned()) throw CommandDecodeError("navigate index must be a non-negative integer");
      return NavigateCmd{NavGoto{idx.get<std::size_t>()}};
    }
    require_fields(j, {"type", "to"});
    if (to == "next") return NavigateCmd{NavNext{}};
    if (to == "prev") return NavigateCmd{NavPrev{}};
    if (to == "home") return NavigateCmd{NavHome{}};
    if (to == "end") return NavigateCmd{NavEnd{}};
    throw CommandDecodeError("unknown navigation target '" + to + "'");
  }
  if (type == "key") {
    require_fields(j, {"type", "key"});
    const auto key = parse_key(string_field(j, "key"));
    if (!key) throw CommandDecodeError("unknown key '" + j["key"].get<std::string>() + "'");
    return KeyCmd{*key};
  }
  if (type == "pointer_down" || type == "pointer_move") {
    require_fields(j, {"type", "x", "y"});
    const softbody::Vec2 p{real_field(j, "x"), real_field(j, "y")};
    if (type == "pointer_down") return PointerDownCmd{p};
    return PointerMoveCmd{p};
  }
  if (type == "set_integrator") {
    require_fields(j, {"type", "name"});
    const auto kind = softbody::parse_integrator(string_field(j, "name"));
    if (!kind) throw CommandDecodeError("unknown integrator '" + j["name"].get<std::string>() + "'");
    return SetIntegratorCmd{*kind};
  }
  if (type == "set_param") {
    require_fields(j, {"type", "path", "value"});
    std::string path = string_field(j, "path");
    if (!find_param(path)) throw CommandDecodeError("unknown parameter '" + path + "'");
    return SetParamCmd{std::move(path), real_field(j, "value")};
  }
  if (type == "pointer_up" || type == "reset" || type == "pause" || type == "run") {
    require_fields(j, {"type"});
    if (type == "pointer_up") return PointerUpCmd{};
    if (type == "reset") return ResetCmd{};
    if (type == "pause") return PauseCmd{};
    return RunCmd{};
  }
  throw CommandDecodeError("unknown command type '" + type + "'");
}

}  // namespace slides::protocol

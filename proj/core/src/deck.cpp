#include "softslides/deck.hpp"

#include <fstream>
#include <sstream>

#include "numfmt.hpp"

namespace slides::detail {
extern const std::string_view kDefaultDeckText;
}

namespace slides {

namespace {

using softslides::detail::format_double;
using softslides::detail::parse_double;
using softslides::detail::parse_int;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw DeckError(line_, field, message);
  }

  // Accepts a decimal number or a fraction p/q.
  double number(std::string_view text, const std::string& field) const {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      const auto num = parse_double(text.substr(0, slash));
      const auto den = parse_double(text.substr(slash + 1));
      if (!num || !den || *den == 0.0) fail(field, "not a number: '" + std::string(text) + "'");
      return *num / *den;
    }
    const auto v = parse_double(text);
    if (!v) fail(field, "not a number: '" + std::string(text) + "'");
    return *v;
  }

  int integer(std::string_view text, const std::string& field) const {
    const auto v = parse_int<int>(text);
    if (!v) fail(field, "not an integer: '" + std::string(text) + "'");
    return *v;
  }

  softbody::Vec2 pair(std::string_view text, const std::string& field) const {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) fail(field, "expected <x>,<y>");
    return {number(text.substr(0, comma), field), number(text.substr(comma + 1), field)};
  }

  bool flag(std::string_view text, const std::string& field) const {
    if (text == "true") return true;
    if (text == "false") return false;
    fail(field, "expected true or false");
  }

 private:
  std::size_t line_;
};

std::string_view kind_name(SlideKind kind) { return kind == SlideKind::Sim ? "sim" : "text"; }

std::string_view dim_name(int d) { return d == 1 ? "1d" : d == 2 ? "2d" : "3d"; }

void parse_body(std::string_view rest, std::size_t line, SlideDecl& slide) {
  const LineParser lp(line);
  const auto tokens = split_ws(rest);
  if (tokens.empty()) lp.fail("body", "missing dimensionality");

  softbody::LodConfig cfg;
  if (tokens[0] == "1d") cfg.dimensionality = 1;
  else if (tokens[0] == "2d") cfg.dimensionality = 2;
  else if (tokens[0] == "3d") cfg.dimensionality = 3;
  else lp.fail("body", "dimensionality must be 1d, 2d or 3d, got '" + std::string(tokens[0]) + "'");

  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) lp.fail("body", "expected key=value, got '" + std::string(tokens[i]) + "'");
    const std::string key(tokens[i].substr(0, eq));
    const std::string_view value = tokens[i].substr(eq + 1);
    if (key == "n") cfg.resolution = lp.integer(value, key);
    else if (key == "layers") cfg.layers = lp.integer(value, key);
    else if (key == "radius") cfg.radius = lp.number(value, key);
    else if (key == "layer_gap") cfg.layer_gap = lp.number(value, key);
    else if (key == "spacing") cfg.spacing = lp.number(value, key);
    else if (key == "mass") cfg.particle_mass = lp.number(value, key);
    else if (key == "k_structural") cfg.k_structural = lp.number(value, key);
    else if (key == "k_radial") cfg.k_radial = lp.number(value, key);
    else if (key == "k_shear") cfg.k_shear = lp.number(value, key);
    else if (key == "damping") cfg.damping = lp.number(value, key);
    else if (key == "center") cfg.center = lp.pair(value, key);
    else if (key == "pin_ends") cfg.pin_ends = lp.flag(value, key);
    else if (key == "material") {
      if (value.empty()) lp.fail(key, "must not be empty");
      cfg.material = std::string(value);
    } else lp.fail(key, "unknown body key");
  }

  try {
    (void)softbody::build_body(cfg);
  } catch (const softbody::InvalidConfig& e) {
    lp.fail(e.field(), e.what());
  }
  slide.bodies.push_back(cfg);
}

void parse_params(std::string_view rest, std::size_t line, softbody::SimParams& params) {
  const LineParser lp(line);
  for (const auto token : split_ws(rest)) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) lp.fail("params", "expected key=value, got '" + std::string(token) + "'");
    const std::string key(token.substr(0, eq));
    const std::string_view value = token.substr(eq + 1);
    if (key == "gravity") params.gravity = lp.pair(value, key);
    else if (key == "timestep") params.timestep = lp.number(value, key);
    else if (key == "restitution") params.restitution = lp.number(value, key);
    else if (key == "drag_stiffness") params.drag_stiffness = lp.number(value, key);
    else if (key == "drag_damping") params.drag_damping = lp.number(value, key);
    else lp.fail(key, "unknown params key");
  }
  if (!(params.timestep > 0.0)) lp.fail("timestep", "must be > 0");
  if (!(params.restitution >= 0.0 && params.restitution <= 1.0)) lp.fail("restitution", "must be in [0, 1]");
  if (!(params.drag_stiffness >= 0.0)) lp.fail("drag_stiffness", "must be >= 0");
  if (!(params.drag_damping >= 0.0)) lp.fail("drag_damping", "must be >= 0");
}

softbody::World make_world(const SlideDecl& decl) {
  softbody::World world;
  world.params = decl.params;
  world.box = decl.viewbox;
  for (const auto& cfg : decl.bodies) world.bodies.push_back(softbody::build_body(cfg));
  return world;
}

}  // namespace

DeckError::DeckError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string()) + field +
                         ": " + message),
      line_(line),
      field_(std::move(field)) {}

DeckFile parse_deck(std::string_view text) {
  DeckFile deck;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const LineParser lp(line_no);

    if (line.starts_with("slide ") || line == "slide") {
      const auto tokens = split_ws(line.substr(5));
      if (tokens.size() != 2) lp.fail("slide", "expected 'slide <id> <text|sim>'");
      SlideDecl slide;
      slide.id = std::string(tokens[0]);
      if (tokens[1] == "text") slide.kind = SlideKind::Text;
      else if (tokens[1] == "sim") slide.kind = SlideKind::Sim;
      else lp.fail("slide", "kind must be text or sim, got '" + std::string(tokens[1]) + "'");
      for (const auto& other : deck.slides) {
        if (other.id == slide.id) lp.fail("slide", "duplicate slide id '" + slide.id + "'");
      }
      deck.slides.push_back(std::move(slide));
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) lp.fail(std::string(line.substr(0, line.find(' '))), "unknown directive");
    const std::string key(trim(line.substr(0, colon)));
    const std::string_view value = trim(line.substr(colon + 1));

    if (deck.slides.empty()) lp.fail(key, "directive before the first slide");
    SlideDecl& slide = deck.slides.back();
    const bool sim = slide.kind == SlideKind::Sim;
    auto require_sim = [&] {
      if (!sim) lp.fail(key, "only allowed on sim slides");
    };

    if (key == "title") {
      slide.title = std::string(value);
    } else if (key == "tidget") {
      const auto anchor = parse_anchor(value);
      if (!anchor) lp.fail(key, "unknown anchor '" + std::string(value) + "'");
      slide.tidgets.push_back(TidgetDecl{*anchor, {}});
    } else if (key == "bullet") {
      if (slide.tidgets.empty()) slide.tidgets.push_back(TidgetDecl{});
      slide.tidgets.back().lines.emplace_back(value);
    } else if (key == "integrator") {
      require_sim();
      const auto kind = softbody::parse_integrator(value);
      if (!kind) lp.fail(key, "unknown integrator '" + std::string(value) + "'");
      slide.integrator = *kind;
    } else if (key == "substeps") {
      require_sim();
      slide.substeps = lp.integer(value, key);
      if (slide.substeps < 1) lp.fail(key, "must be >= 1");
    } else if (key == "viewbox") {
      require_sim();
      const auto tokens = split_ws(value);
      if (tokens.size() != 4) lp.fail(key, "expected <min_x> <min_y> <max_x> <max_y>");
      softbody::ViewBox box{{lp.number(tokens[0], key), lp.number(tokens[1], key)},
                            {lp.number(tokens[2], key), lp.number(tokens[3], key)}};
      if (!(box.min.x < box.max.x && box.min.y < box.max.y)) lp.fail(key, "min must be below max");
      slide.viewbox = box;
    } else if (key == "params") {
      require_sim();
      parse_params(value, line_no, slide.params);
    } else if (key == "body") {
      require_sim();
      parse_body(value, line_no, slide);
    } else {
      lp.fail(key, "unknown directive");
    }
  }

  for (const auto& slide : deck.slides) {
    if (slide.kind == SlideKind::Sim && slide.bodies.empty()) {
      throw DeckError(0, "body", "sim slide '" + slide.id + "' declares no bodies");
    }
  }
  if (deck.slides.empty()) throw DeckError(0, "slide", "deck declares no slides");
  return deck;
}

std::string serialize_deck(const DeckFile& deck) {
  std::ostringstream out;
  bool first = true;
  for (const auto& s : deck.slides) {
    if (!first) out << '\n';
    first = false;
    out << "slide " << s.id << ' ' << kind_name(s.kind) << '\n';
    out << "title: " << s.title << '\n';
    for (const auto& t : s.tidgets) {
      out << "tidget: " << to_string(t.anchor) << '\n';
      for (const auto& line : t.lines) out << "bullet: " << line << '\n';
    }
    if (s.kind != SlideKind::Sim) continue;
    out << "integrator: " << softbody::to_string(s.integrator) << '\n';
    out << "substeps: " << s.substeps << '\n';
    out << "viewbox: " << format_double(s.viewbox.min.x) << ' ' << format_double(s.viewbox.min.y) << ' '
        << format_double(s.viewbox.max.x) << ' ' << format_double(s.viewbox.max.y) << '\n';
    const auto& p = s.params;
    out << "params: gravity=" << format_double(p.gravity.x) << ',' << format_double(p.gravity.y)
        << " timestep=" << format_double(p.timestep) << " restitution=" << format_double(p.restitution)
        << " drag_stiffness=" << format_double(p.drag_stiffness)
        << " drag_damping=" << format_double(p.drag_damping) << '\n';
    for (const auto& b : s.bodies) {
      out << "body: " << dim_name(b.dimensionality) << " n=" << b.resolution << " layers=" << b.layers
          << " radius=" << format_double(b.radius) << " layer_gap=" << format_double(b.layer_gap)
          << " spacing=" << format_double(b.spacing) << " mass=" << format_double(b.particle_mass)
          << " k_structural=" << format_double(b.k_structural) << " k_radial=" << format_double(b.k_radial)
          << " k_shear=" << format_double(b.k_shear) << " damping=" << format_double(b.damping)
          << " center=" << format_double(b.center.x) << ',' << format_double(b.center.y)
          << " pin_ends=" << (b.pin_ends ? "true" : "false") << " material=" << b.material << '\n';
    }
  }
  return out.str();
}

Presentation build_presentation(const DeckFile& deck) {
  PresentationBuilder builder;
  for (const auto& decl : deck.slides) {
    Slide slide;
    slide.id = decl.id;
    slide.title = decl.title;
    for (const auto& t : decl.tidgets) {
      Tidget tidget;
      tidget.lines = t.lines;
      tidget.anchor = t.anchor;
      slide.tidgets.push_back(std::move(tidget));
    }
    if (decl.kind == SlideKind::Sim) {
      SimScene scene;
      try {
        scene.world = make_world(decl);
        softbody::validate(scene.world);
      } catch (const softbody::InvalidConfig& e) {
        throw DeckError(0, e.field(), "slide '" + decl.id + "': " + e.what());
      } catch (const softbody::InvalidWorld& e) {
        throw DeckError(0, "body", "slide '" + decl.id + "': " + e.what());
      }
      scene.integrator = decl.integrator;
      scene.substeps_per_tick = decl.substeps;
      scene.running = true;
      slide.initial_scene = std::move(scene);
    }
    try {
      builder.add_slide(std::move(slide));
    } catch (const BuildError& e) {
      throw DeckError(0, "slide", e.what());
    }
  }
  return std::move(builder).finish();
}

std::string read_deck_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DeckError(0, "path", "cannot open deck file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Presentation load_deck(const std::filesystem::path& path) {
  return build_presentation(parse_deck(read_deck_text(path)));
}

std::string_view default_deck_text() { return detail::kDefaultDeckText; }

Presentation default_deck() { return build_presentation(parse_deck(default_deck_text())); }

std::uint64_t deck_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace slides

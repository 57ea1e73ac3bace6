#include "softslides/presentation.hpp"

namespace slides {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void restore(Slide& slide) {
  for (auto& t : slide.tidgets) t.reveal_index = 0;
  slide.scene = slide.initial_scene;
}

}  // namespace

std::string_view to_string(Anchor anchor) {
  switch (anchor) {
    case Anchor::TopLeft: return "top_left";
    case Anchor::TopRight: return "top_right";
    case Anchor::BottomLeft: return "bottom_left";
    case Anchor::BottomRight: return "bottom_right";
  }
  return "top_left";
}

std::optional<Anchor> parse_anchor(std::string_view name) {
  if (name == "top_left") return Anchor::TopLeft;
  if (name == "top_right") return Anchor::TopRight;
  if (name == "bottom_left") return Anchor::BottomLeft;
  if (name == "bottom_right") return Anchor::BottomRight;
  return std::nullopt;
}

std::string key_name(Key key) {
  switch (key.code) {
    case Key::kSpace: return "space";
    case Key::kPageUp: return "pageup";
    case Key::kPageDown: return "pagedown";
    case Key::kHome: return "home";
    case Key::kEnd: return "end";
    default: break;
  }
  if (key.code > 0x20 && key.code < 0x7f) return std::string(1, static_cast<char>(key.code));
  return "unknown";
}

std::optional<Key> parse_key(std::string_view name) {
  if (name == "space") return Key{Key::kSpace};
  if (name == "pageup") return Key{Key::kPageUp};
  if (name == "pagedown") return Key{Key::kPageDown};
  if (name == "home") return Key{Key::kHome};
  if (name == "end") return Key{Key::kEnd};
  if (name.size() == 1 && name[0] > 0x20 && name[0] < 0x7f) return Key::character(name[0]);
  return std::nullopt;
}

PresentationBuilder& PresentationBuilder::add_slide(Slide slide) {
  for (const auto& s : slides_) {
    if (s.id == slide.id) throw BuildError("duplicate slide id '" + slide.id + "'");
  }
  if (slide.initial_scene && slide.initial_scene->substeps_per_tick < 1) {
    throw BuildError("slide '" + slide.id + "': substeps_per_tick must be >= 1");
  }
  slides_.push_back(std::move(slide));
  return *this;
}

Presentation PresentationBuilder::finish() && {
  if (slides_.empty()) throw BuildError("a presentation needs at least one slide");
  return Presentation(std::move(slides_));
}

Presentation::Presentation(std::vector<Slide> slides) : slides_(std::move(slides)) {
  for (auto& s : slides_) restore(s);
}

void Presentation::enter(std::size_t index) {
  if (index == current_) return;
  restore(slides_[current_]);
  current_ = index;
  restore(slides_[current_]);
}

void Presentation::navigate(const NavCommand& cmd) {
  const std::size_t last = slides_.size() - 1;
  std::visit(Overloaded{
                 [&](NavNext) { enter(current_ < last ? current_ + 1 : last); },
                 [&](NavPrev) { enter(current_ > 0 ? current_ - 1 : 0); },
                 [&](NavHome) { enter(0); },
                 [&](NavEnd) { enter(last); },
                 [&](NavGoto g) {
                   if (g.index > last) {
                     throw NavigationError("slide index " + std::to_string(g.index) +
                                           " out of range (deck has " +
                                           std::to_string(slides_.size()) + " slides)");
                   }
                   enter(g.index);
                 },
             },
             cmd);
}

void Presentation::reset_scene() { current().scene = current().initial_scene; }

void Presentation::set_integrator(softbody::IntegratorKind kind) {
  auto& scene = current().scene;
  if (!scene) return;
  scene->integrator = kind;
  scene->world.half_step.reset();
}

void Presentation::set_running(bool running) {
  auto& scene = current().scene;
  if (!scene) return;
  // A faulted scene stays paused until reset.
  scene->running = running && !scene->fault;
}

void Presentation::reveal_next_bullet() {
  for (auto& t : current().tidgets) {
    if (t.reveal_index < t.lines.size()) {
      ++t.reveal_index;
      return;
    }
  }
}

void Presentation::advance_scene() {
  auto& scene = current().scene;
  if (!scene || !scene->running) return;
  try {
    for (int i = 0; i < scene->substeps_per_tick; ++i) softbody::step(scene->world, scene->integrator);
  } catch (const softbody::SimulationFault& fault) {
    scene->running = false;
    scene->fault = fault.what();
  }
}

void Presentation::handle_key(Key key) {
  Slide& slide = current();
  if (slide.on_key && slide.on_key(slide, key)) return;

  switch (key.code) {
    case Key::kSpace:
    case Key::kPageDown: navigate(NavNext{}); return;
    case Key::kPageUp: navigate(NavPrev{}); return;
    case Key::kHome: navigate(NavHome{}); return;
    case Key::kEnd: navigate(NavEnd{}); return;
    case 't': toggle_tidgets(); return;
    case 'b': reveal_next_bullet(); return;
    case 'r': reset_scene(); return;
    case '1': set_integrator(softbody::IntegratorKind::ExplicitEuler); return;
    case '2': set_integrator(softbody::IntegratorKind::Midpoint); return;
    case '3': set_integrator(softbody::IntegratorKind::Feynman); return;
    case '4': set_integrator(softbody::IntegratorKind::RK4); return;
    case 'p':
      if (slide.scene) set_running(!slide.scene->running);
      return;
    default: return;
  }
}

void Presentation::dispatch(const InputEvent& event) {
  std::visit(Overloaded{
                 [&](const KeyEvent& e) { handle_key(e.key); },
                 [&](const PointerDown& e) {
                   auto& scene = current().scene;
                   if (scene && softbody::is_finite(e.position)) softbody::begin_drag(scene->world, e.position);
                 },
                 [&](const PointerMove& e) {
                   auto& scene = current().scene;
                   if (scene && softbody::is_finite(e.position)) softbody::update_drag(scene->world, e.position);
                 },
                 [&](const PointerUp&) {
                   if (auto& scene = current().scene) softbody::end_drag(scene->world);
                 },
                 [&](const TickEvent& e) {
                   if (e.dt > 0.0) advance_scene();
                 },
             },
             event);
}

}  // namespace slides

#include <gtest/gtest.h>

#include <random>

#include "softslides/body_builder.hpp"
#include "softslides/deck.hpp"
#include "softslides/frame.hpp"
#include "softslides/presentation.hpp"

using namespace slides;

namespace {

Slide text_slide(std::string id, std::vector<std::string> lines = {"one", "two"}) {
  Slide s;
  s.id = std::move(id);
  s.title = s.id;
  s.tidgets.push_back(Tidget{std::move(lines), Anchor::TopLeft, true, 0});
  return s;
}

Slide sim_slide(std::string id) {
  Slide s = text_slide(std::move(id));
  SimScene scene;
  softbody::LodConfig cfg;
  scene.world.bodies.push_back(softbody::build_body(cfg));
  scene.world.box = {{-1, -1}, {1, 1}};
  s.initial_scene = scene;
  return s;
}

Presentation three() {
  PresentationBuilder b;
  b.add_slide(text_slide("a")).add_slide(sim_slide("b")).add_slide(text_slide("c"));
  return std::move(b).finish();
}

KeyEvent key(char c) { return KeyEvent{Key::character(c)}; }

}  // namespace

TEST(Builder, InsertionOrder) {
  PresentationBuilder b;
  b.add_slide(text_slide("A")).add_slide(text_slide("B"));
  const auto p = std::move(b).finish();
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.slides()[0].id, "A");
  EXPECT_EQ(p.slides()[1].id, "B");
  EXPECT_EQ(p.current_index(), 0u);
}

TEST(Builder, EmptyAndDuplicateRejected) {
  EXPECT_THROW(PresentationBuilder{}.finish(), BuildError);
  PresentationBuilder b;
  b.add_slide(text_slide("A"));
  try {
    b.add_slide(text_slide("A"));
    FAIL();
  } catch (const BuildError& e) {
    EXPECT_NE(std::string(e.what()).find("'A'"), std::string::npos);
  }
}

TEST(Builder, RejectsZeroSubsteps) {
  Slide s = sim_slide("x");
  s.initial_scene->substeps_per_tick = 0;
  PresentationBuilder b;
  EXPECT_THROW(b.add_slide(std::move(s)), BuildError);
}

TEST(Navigate, ClampsAndGotoChecks) {
  auto p = default_deck();
  ASSERT_EQ(p.size(), 15u);
  p.navigate(NavGoto{14});
  p.navigate(NavNext{});
  EXPECT_EQ(p.current_index(), 14u);
  p.navigate(NavHome{});
  p.navigate(NavPrev{});
  EXPECT_EQ(p.current_index(), 0u);
  EXPECT_THROW(p.navigate(NavGoto{15}), NavigationError);
  EXPECT_EQ(p.current_index(), 0u);
  p.navigate(NavEnd{});
  EXPECT_EQ(p.current_index(), 14u);
}

TEST(Navigate, PrevUndoesNextInInterior) {
  auto p = default_deck();
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    p.navigate(NavGoto{i});
    p.navigate(NavNext{});
    p.navigate(NavPrev{});
    EXPECT_EQ(p.current_index(), i);
  }
}

TEST(Navigate, EnteringResetsRevealAndScene) {
  auto p = three();
  p.navigate(NavNext{});
  p.dispatch(key('b'));
  for (int i = 0; i < 10; ++i) p.dispatch(TickEvent{});
  EXPECT_NE(p.current().scene->world.tick, 0u);
  p.navigate(NavNext{});
  p.navigate(NavPrev{});
  EXPECT_EQ(p.current().tidgets[0].reveal_index, 0u);
  EXPECT_EQ(p.current().scene->world.tick, 0u);
}

TEST(Dispatch, DefaultKeyMap) {
  auto p = three();
  p.dispatch(KeyEvent{Key{Key::kSpace}});
  EXPECT_EQ(p.current_index(), 1u);
  p.dispatch(KeyEvent{Key{Key::kPageDown}});
  EXPECT_EQ(p.current_index(), 2u);
  p.dispatch(KeyEvent{Key{Key::kPageUp}});
  EXPECT_EQ(p.current_index(), 1u);
  p.dispatch(KeyEvent{Key{Key::kEnd}});
  EXPECT_EQ(p.current_index(), 2u);
  p.dispatch(KeyEvent{Key{Key::kHome}});
  EXPECT_EQ(p.current_index(), 0u);

  p.navigate(NavGoto{1});
  const std::pair<char, softbody::IntegratorKind> digits[] = {
      {'1', softbody::IntegratorKind::ExplicitEuler}, {'2', softbody::IntegratorKind::Midpoint},
      {'3', softbody::IntegratorKind::Feynman}, {'4', softbody::IntegratorKind::RK4}};
  for (auto [c, kind] : digits) {
    p.dispatch(key(c));
    EXPECT_EQ(p.current().scene->integrator, kind);
  }
  p.dispatch(key('p'));
  EXPECT_FALSE(p.current().scene->running);
  p.dispatch(TickEvent{});
  EXPECT_EQ(p.current().scene->world.tick, 0u);
  p.dispatch(key('p'));
  EXPECT_TRUE(p.current().scene->running);
  p.dispatch(TickEvent{});
  EXPECT_EQ(p.current().scene->world.tick, 4u);
  p.dispatch(key('r'));
  EXPECT_EQ(p.current().scene->world.tick, 0u);
}

TEST(Dispatch, TogglesTidgetsAndHidesThemFromSnapshots) {
  auto p = three();
  p.dispatch(key('b'));
  ASSERT_EQ(protocol::make_snapshot(p, 0).tidgets.size(), 1u);
  p.dispatch(key('t'));
  EXPECT_FALSE(p.tidgets_enabled());
  EXPECT_TRUE(protocol::make_snapshot(p, 0).tidgets.empty());
  p.dispatch(key('t'));
  EXPECT_TRUE(p.tidgets_enabled());
}

TEST(Dispatch, RevealNeverOverflows) {
  auto p = three();
  for (int i = 0; i < 20; ++i) p.dispatch(key('b'));
  EXPECT_EQ(p.current().tidgets[0].reveal_index, 2u);
  const auto snap = protocol::make_snapshot(p, 0);
  EXPECT_EQ(snap.tidgets[0].lines, (std::vector<std::string>{"one", "two"}));
}

TEST(Dispatch, PointerOnTextSlideIsNoop) {
  auto p = three();
  const auto before = protocol::encode_frame(protocol::make_snapshot(p, 0));
  p.dispatch(PointerDown{{0, 0}});
  p.dispatch(PointerMove{{0.5, 0.5}});
  p.dispatch(PointerUp{});
  p.dispatch(TickEvent{});
  EXPECT_EQ(protocol::encode_frame(protocol::make_snapshot(p, 0)), before);
}

TEST(Dispatch, PointerDragsSceneParticle) {
  auto p = three();
  p.navigate(NavGoto{1});
  p.dispatch(PointerDown{{0.0, 0.4}});
  ASSERT_TRUE(p.current().scene->world.drag.has_value());
  p.dispatch(PointerMove{{0.2, 0.9}});
  EXPECT_EQ(p.current().scene->world.drag->target, (softbody::Vec2{0.2, 0.9}));
  p.dispatch(PointerDown{{std::nan(""), 0.0}});
  EXPECT_EQ(p.current().scene->world.drag->target, (softbody::Vec2{0.2, 0.9}));
  p.dispatch(PointerUp{});
  EXPECT_FALSE(p.current().scene->world.drag.has_value());
}

TEST(Dispatch, SlideHandlerConsumesFirst) {
  PresentationBuilder b;
  Slide s = text_slide("quiz");
  int seen = 0;
  s.on_key = [&seen](Slide& slide, Key k) {
    ++seen;
    if (k == Key::character('b')) {
      slide.title = "answer";
      return true;
    }
    return false;
  };
  b.add_slide(std::move(s)).add_slide(text_slide("next"));
  auto p = std::move(b).finish();
  p.dispatch(key('b'));
  EXPECT_EQ(p.current().title, "answer");
  EXPECT_EQ(p.current().tidgets[0].reveal_index, 0u);
  p.dispatch(KeyEvent{Key{Key::kSpace}});
  EXPECT_EQ(p.current_index(), 1u);
  EXPECT_EQ(seen, 2);
}

TEST(Dispatch, ResetRestoresInitialSnapshot) {
  auto p = default_deck();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.navigate(NavGoto{i});
    const auto initial = protocol::encode_frame(protocol::make_snapshot(p, 7));
    p.dispatch(PointerDown{{0.1, 0.2}});
    p.dispatch(PointerMove{{1.0, 1.0}});
    p.dispatch(key('3'));
    for (int t = 0; t < 30; ++t) p.dispatch(TickEvent{});
    p.dispatch(PointerUp{});
    p.dispatch(key('r'));
    EXPECT_EQ(protocol::encode_frame(protocol::make_snapshot(p, 7)), initial) << "slide " << i;
  }
}

TEST(Dispatch, FaultPausesScene) {
  auto p = three();
  p.navigate(NavGoto{1});
  p.current().scene->world.params.timestep = 1e300;
  p.dispatch(TickEvent{});
  ASSERT_TRUE(p.current().scene->fault.has_value());
  EXPECT_FALSE(p.current().scene->running);
  p.dispatch(key('p'));
  EXPECT_FALSE(p.current().scene->running);
  p.dispatch(key('r'));
  EXPECT_FALSE(p.current().scene->fault.has_value());
  EXPECT_TRUE(p.current().scene->running);
}

TEST(Dispatch, FuzzStaysInRange) {
  auto p = default_deck();
  std::mt19937_64 rng(99);
  const char keys[] = " btrp1234xq";
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int i = 0; i < 5000; ++i) {
    switch (pick(rng)) {
      case 0: p.dispatch(KeyEvent{Key{Key::kPageUp}}); break;
      case 1: p.dispatch(KeyEvent{Key{Key::kPageDown}}); break;
      case 2: p.dispatch(key(keys[static_cast<std::size_t>(pick(rng))])); break;
      case 3: p.dispatch(PointerDown{{coord(rng), coord(rng)}}); break;
      case 4: p.dispatch(PointerMove{{coord(rng), coord(rng)}}); break;
      case 5: p.dispatch(PointerUp{}); break;
      default: p.dispatch(TickEvent{}); break;
    }
    ASSERT_LT(p.current_index(), p.size());
    for (const auto& t : p.current().tidgets) ASSERT_LE(t.reveal_index, t.lines.size());
  }
}

TEST(Keys, WireNamesRoundTrip) {
  for (std::uint32_t code : {Key::kSpace, Key::kPageUp, Key::kPageDown, Key::kHome, Key::kEnd}) {
    EXPECT_EQ(parse_key(key_name(Key{code})), Key{code});
  }
  EXPECT_EQ(parse_key("t"), Key::character('t'));
  EXPECT_FALSE(parse_key("tt").has_value());
  EXPECT_FALSE(parse_key("").has_value());
  EXPECT_EQ(parse_anchor("bottom_right"), Anchor::BottomRight);
  EXPECT_FALSE(parse_anchor("middle").has_value());
}

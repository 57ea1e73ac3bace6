#include <gtest/gtest.h>

#include "softslides/body_builder.hpp"
#include "softslides/deck.hpp"
#include "softslides/frame.hpp"

using namespace slides;
using namespace slides::protocol;

namespace {

FrameSnapshot golden_snapshot() {
  FrameSnapshot s;
  s.tick = 42;
  s.slide_index = 3;
  s.slide_title = "Quote \" and \\ and\ttab";
  s.integrator = "feynman";
  s.running = true;
  s.tidgets.push_back({Anchor::TopLeft, {"first", "second"}});
  s.tidgets.push_back({Anchor::BottomRight, {}});
  BodyView a;
  a.positions = {{0.1, -0.25}, {1e-7, 3.0}, {-2.5, 1.0 / 3.0}};
  a.springs = {{0, 1}, {1, 2}};
  a.ratios = {1.0, 0.9999999999999999};
  BodyView b;
  b.positions = {{0, 0}, {-0.0, 1e21}};
  b.springs = {{0, 1}};
  b.ratios = {1.5};
  s.bodies = {a, b};
  s.drag = DragView{1, 0, {0.5, -0.75}};
  return s;
}

constexpr std::string_view kGolden =
    R"golden({"tick":42,"slide":3,"title":"Quote \" and \\ and\u0009tab","integrator":"feynman","running":true,"tidgets":[{"anchor":"top_left","lines":["first","second"]},{"anchor":"bottom_right","lines":[]}],"bodies":[{"positions":[0.1,-0.25,1e-07,3,-2.5,0.3333333333333333],"springs":[0,1,1,2],"ratios":[1,0.9999999999999999]},{"positions":[0,0,-0,1e+21],"springs":[0,1],"ratios":[1.5]}],"drag":{"body":1,"particle":0,"x":0.5,"y":-0.75}})golden";

std::size_t decode_offset(std::string_view bytes) {
  try {
    decode_frame(bytes);
  } catch (const FrameDecodeError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "decoded: " << bytes;
  return 0;
}

}  // namespace

TEST(EncodeFrame, Golden) { EXPECT_EQ(encode_frame(golden_snapshot()), kGolden); }

TEST(DecodeFrame, GoldenRoundTrip) {
  const auto s = decode_frame(kGolden);
  EXPECT_EQ(s, golden_snapshot());
  EXPECT_EQ(encode_frame(s), kGolden);
}

TEST(DecodeFrame, EmptySnapshot) {
  FrameSnapshot s;
  const auto bytes = encode_frame(s);
  EXPECT_EQ(bytes,
            R"({"tick":0,"slide":0,"title":"","integrator":"","running":false,"tidgets":[],"bodies":[],"drag":null})");
  EXPECT_EQ(decode_frame(bytes), s);
}

TEST(DecodeFrame, ErrorOffsets) {
  const std::string good = encode_frame(FrameSnapshot{});
  EXPECT_EQ(decode_offset(""), 0u);
  EXPECT_EQ(decode_offset("{\"tick\":x"), 8u);
  EXPECT_EQ(decode_offset(good + " "), good.size());
  const std::string prefix = R"({"tick":0,"slide":0,"title":"","integrator":"","running":)";
  EXPECT_EQ(decode_offset(prefix + "maybe"), prefix.size());
  // Parses, but is not the canonical spelling.
  EXPECT_EQ(decode_offset(R"({"tick":00,"slide":0,"title":"","integrator":"","running":false,"tidgets":[],"bodies":[],"drag":null})"), 9u);
  std::string spaced = encode_frame(golden_snapshot());
  const auto at = spaced.find("0.1");
  spaced.replace(at, 3, "0.10");
  EXPECT_EQ(decode_offset(spaced), at + 3);
  // Spring endpoint out of range.
  std::string bad = encode_frame(golden_snapshot());
  const auto sp = bad.find("\"springs\":[0,1,1,2]");
  bad.replace(sp, 19, "\"springs\":[0,1,1,9]");
  EXPECT_GT(decode_offset(bad), sp);
}

TEST(DecodeFrame, RejectsNonFinite) {
  EXPECT_THROW(decode_frame(R"({"tick":0,"slide":0,"title":"","integrator":"","running":false,"tidgets":[],"bodies":[{"positions":[nan,0],"springs":[],"ratios":[]}],"drag":null})"),
               FrameDecodeError);
}

TEST(EncodeFrame, DistinctSnapshotsDistinctBytes) {
  auto a = golden_snapshot();
  auto b = a;
  b.bodies[0].positions[0].x = std::nextafter(b.bodies[0].positions[0].x, 1.0);
  EXPECT_NE(encode_frame(a), encode_frame(b));
  b = a;
  b.drag.reset();
  EXPECT_NE(encode_frame(a), encode_frame(b));
  b = a;
  b.tidgets[1].lines.push_back("");
  EXPECT_NE(encode_frame(a), encode_frame(b));
}

TEST(MakeSnapshot, DeckSlidesRoundTrip) {
  auto p = default_deck();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.navigate(NavGoto{i});
    for (int t = 0; t < 3; ++t) p.dispatch(TickEvent{});
    const auto s = make_snapshot(p, 11);
    const auto bytes = encode_frame(s);
    EXPECT_EQ(decode_frame(bytes), s);
    EXPECT_EQ(s.slide_index, i);
    EXPECT_EQ(s.bodies.empty(), !p.current().scene.has_value());
  }
}

TEST(MakeSnapshot, RatiosAndDrag) {
  auto p = default_deck();
  p.navigate(NavGoto{3});
  auto snap = make_snapshot(p, 0);
  ASSERT_EQ(snap.bodies.size(), 1u);
  for (double r : snap.bodies[0].ratios) EXPECT_DOUBLE_EQ(r, 1.0);
  EXPECT_EQ(snap.integrator, "rk4");
  EXPECT_FALSE(snap.drag.has_value());
  p.dispatch(PointerDown{{0.0, 0.6}});
  snap = make_snapshot(p, 0);
  ASSERT_TRUE(snap.drag.has_value());
  EXPECT_EQ(snap.drag->target, (softbody::Vec2{0.0, 0.6}));
}

TEST(EncodeFrame, SizeGrowsLinearly) {
  std::vector<double> bytes_per_item;
  for (int n : {8, 16, 32, 64}) {
    softbody::LodConfig cfg;
    cfg.dimensionality = 3;
    cfg.layers = 3;
    cfg.resolution = n;
    PresentationBuilder b;
    Slide s;
    s.id = "x";
    SimScene scene;
    scene.world.bodies.push_back(softbody::build_body(cfg));
    s.initial_scene = scene;
    b.add_slide(std::move(s));
    const auto p = std::move(b).finish();
    const auto snap = make_snapshot(p, 0);
    const double items = static_cast<double>(scene.world.particle_count() + scene.world.spring_count());
    bytes_per_item.push_back(static_cast<double>(encode_frame(snap).size()) / items);
  }
  const auto [lo, hi] = std::minmax_element(bytes_per_item.begin(), bytes_per_item.end());
  EXPECT_LT(*hi / *lo, 1.25);
}

TEST(Quote, EscapesControlCharacters) {
  EXPECT_EQ(quote("a\"b\\c\n\x01"), "\"a\\\"b\\\\c\\u000a\\u0001\"");
}

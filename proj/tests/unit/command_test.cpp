#include <gtest/gtest.h>

#include "softslides/command.hpp"

using namespace slides;
using namespace slides::protocol;

namespace {

template <class T>
const T& as(const Command& c) {
  EXPECT_TRUE(std::holds_alternative<T>(c));
  return std::get<T>(c);
}

}  // namespace

TEST(EncodeCommand, CanonicalSpellings) {
  EXPECT_EQ(encode_command(NavigateCmd{NavGoto{3}}), R"({"type":"navigate","to":"goto","index":3})");
  EXPECT_EQ(encode_command(NavigateCmd{NavNext{}}), R"({"type":"navigate","to":"next"})");
  EXPECT_EQ(encode_command(KeyCmd{Key{Key::kPageUp}}), R"({"type":"key","key":"pageup"})");
  EXPECT_EQ(encode_command(KeyCmd{Key::character('"')}), R"({"type":"key","key":"\""})");
  EXPECT_EQ(encode_command(PointerDownCmd{{0.5, -1.25}}), R"({"type":"pointer_down","x":0.5,"y":-1.25})");
  EXPECT_EQ(encode_command(PointerUpCmd{}), R"({"type":"pointer_up"})");
  EXPECT_EQ(encode_command(SetIntegratorCmd{softbody::IntegratorKind::RK4}), R"({"type":"set_integrator","name":"rk4"})");
  EXPECT_EQ(encode_command(SetParamCmd{"restitution", 0.75}), R"({"type":"set_param","path":"restitution","value":0.75})");
  EXPECT_EQ(encode_command(ResetCmd{}), R"({"type":"reset"})");
  EXPECT_EQ(encode_command(PauseCmd{}), R"({"type":"pause"})");
  EXPECT_EQ(encode_command(RunCmd{}), R"({"type":"run"})");
}

TEST(DecodeCommand, RoundTripsEveryKind) {
  const Command all[] = {NavigateCmd{NavNext{}}, NavigateCmd{NavPrev{}}, NavigateCmd{NavHome{}},
                         NavigateCmd{NavEnd{}}, NavigateCmd{NavGoto{14}}, KeyCmd{Key{Key::kSpace}},
                         KeyCmd{Key::character('3')}, PointerDownCmd{{0.1, 0.2}}, PointerMoveCmd{{-3, 1e-9}},
                         PointerUpCmd{}, SetIntegratorCmd{softbody::IntegratorKind::Feynman},
                         SetParamCmd{"gravity.y", -1.0 / 3.0}, ResetCmd{}, PauseCmd{}, RunCmd{}};
  for (const auto& c : all) {
    const std::string bytes = encode_command(c);
    EXPECT_EQ(encode_command(decode_command(bytes)), bytes);
  }
}

TEST(DecodeCommand, AnyKeyOrderAndWhitespace) {
  const auto c = decode_command(R"(  { "y": 2, "x" : 1.5, "type": "pointer_move" } )");
  EXPECT_EQ(as<PointerMoveCmd>(c).position, (softbody::Vec2{1.5, 2.0}));
  EXPECT_EQ(as<NavigateCmd>(decode_command(R"({"index":2,"to":"goto","type":"navigate"})")).nav.index(), 4u);
}

TEST(DecodeCommand, RejectsMalformed) {
  const char* bad[] = {
      "",
      "not json",
      "[]",
      R"({"type":"jump"})",
      R"({"type":"navigate","to":"sideways"})",
      R"({"type":"navigate","to":"goto"})",
      R"({"type":"navigate","to":"goto","index":-1})",
      R"({"type":"navigate","to":"goto","index":1.5})",
      R"({"type":"navigate","to":"next","index":1})",
      R"({"type":"key","key":"f13"})",
      R"({"type":"key"})",
      R"({"type":"pointer_down","x":1})",
      R"({"type":"pointer_down","x":"1","y":2})",
      R"({"type":"set_integrator","name":"RK5"})",
      R"({"type":"set_param","path":"mass","value":1})",
      R"({"type":"set_param","path":"restitution","value":true})",
      R"({"type":"reset","extra":1})",
      R"({"kind":"reset"})",
  };
  for (const char* b : bad) EXPECT_THROW(decode_command(b), CommandDecodeError) << b;
}

TEST(ParamSpecs, TableIsConsistent) {
  ASSERT_FALSE(param_specs().empty());
  for (const auto& spec : param_specs()) {
    EXPECT_LT(spec.min, spec.max) << spec.path;
    EXPECT_EQ(find_param(spec.path), &spec);
  }
  EXPECT_EQ(find_param("nope"), nullptr);
  EXPECT_TRUE(find_param("substeps")->integer);
}

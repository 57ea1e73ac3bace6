#include <gtest/gtest.h>

#include "softslides/framing.hpp"

using namespace slides::protocol;

TEST(FrameMessage, LayoutIsLengthTagPayload) {
  const std::string bytes = frame_message({MessageType::Frame, "abc"});
  EXPECT_EQ(bytes, std::string("\0\0\0\x04" "Fabc", 8));
  EXPECT_EQ(frame_message({MessageType::Error, ""}), std::string("\0\0\0\x01" "E", 5));
}

TEST(MessageReader, ReassemblesByteByByte) {
  const Message msgs[] = {{MessageType::Header, "{}"}, {MessageType::Frame, std::string(300, 'x')},
                          {MessageType::Command, ""}};
  std::string stream;
  for (const auto& m : msgs) stream += frame_message(m);

  MessageReader r;
  std::vector<Message> got;
  for (char c : stream) {
    r.feed(std::string_view(&c, 1));
    while (auto m = r.next()) got.push_back(*m);
  }
  ASSERT_EQ(got.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(got[i], msgs[i]);
  EXPECT_EQ(r.pending(), 0u);
  EXPECT_EQ(r.consumed(), stream.size());
}

TEST(MessageReader, PartialMessageWaits) {
  MessageReader r;
  const std::string bytes = frame_message({MessageType::Frame, "payload"});
  r.feed(std::string_view(bytes).substr(0, 6));
  EXPECT_FALSE(r.next().has_value());
  EXPECT_EQ(r.pending(), 6u);
}

TEST(MessageReader, BadTagReportsOffset) {
  MessageReader r;
  std::string bytes = frame_message({MessageType::Frame, "ok"});
  const std::size_t second = bytes.size();
  bytes += std::string("\0\0\0\x02" "Zx", 6);
  r.feed(bytes);
  ASSERT_TRUE(r.next().has_value());
  try {
    r.next();
    FAIL();
  } catch (const FramingError& e) {
    EXPECT_EQ(e.offset(), second);
  }
}

TEST(MessageReader, ZeroAndOversizedLengthsRejected) {
  MessageReader zero;
  zero.feed(std::string("\0\0\0\0", 4));
  EXPECT_THROW(zero.next(), FramingError);
  MessageReader huge;
  huge.feed("\x7f\xff\xff\xff");
  EXPECT_THROW(huge.next(), FramingError);
}

TEST(MessageType, TagsRoundTrip) {
  for (char c : {'H', 'F', 'C', 'E'}) EXPECT_EQ(static_cast<char>(*message_type_from_tag(c)), c);
  EXPECT_FALSE(message_type_from_tag('f').has_value());
}

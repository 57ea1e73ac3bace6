#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slides::protocol {

// Wire layout of one message:
//
//   u32 big-endian length of (tag + payload) | u8 tag | payload
//
// Trace files are a plain concatenation of messages.

enum class MessageType : char {
  Header = 'H',
  Frame = 'F',
  Command = 'C',
  Error = 'E',
};

std::optional<MessageType> message_type_from_tag(char tag);

struct Message {
  MessageType type = MessageType::Frame;
  std::string payload;
  friend bool operator==(const Message&, const Message&) = default;
};

inline constexpr std::size_t kMaxMessageSize = 64u << 20;

class FramingError : public std::runtime_error {
 public:
  FramingError(std::size_t offset, const std::string& message);
  /// Byte offset of the bad message in the stream.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

std::string frame_message(const Message& message);

/// Incremental decoder for a byte stream.
class MessageReader {
 public:
  void feed(std::string_view bytes);
  /// Next complete message, if any. Throws FramingError on a bad tag or an
  /// oversized length; the reader is unusable afterwards.
  std::optional<Message> next();
  /// Bytes received but not yet consumed by a complete message.
  std::size_t pending() const { return buffer_.size() - head_; }
  std::size_t consumed() const { return consumed_; }

 private:
  std::string buffer_;
  std::size_t head_ = 0;
  std::size_t consumed_ = 0;
};

}  // namespace slides::protocol

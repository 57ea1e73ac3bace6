#include "softslides/framing.hpp"

namespace slides::protocol {

FramingError::FramingError(std::size_t offset, const std::string& message)
    : std::runtime_error("framing error at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

std::optional<MessageType> message_type_from_tag(char tag) {
  switch (tag) {
    case 'H': return MessageType::Header;
    case 'F': return MessageType::Frame;
    case 'C': return MessageType::Command;
    case 'E': return MessageType::Error;
    default: return std::nullopt;
  }
}

std::string frame_message(const Message& message) {
  const std::size_t body = message.payload.size() + 1;
  if (body > kMaxMessageSize) throw FramingError(0, "message too large");
  std::string out;
  out.reserve(4 + body);
  out += static_cast<char>((body >> 24) & 0xff);
  out += static_cast<char>((body >> 16) & 0xff);
  out += static_cast<char>((body >> 8) & 0xff);
  out += static_cast<char>(body & 0xff);
  out += static_cast<char>(message.type);
  out += message.payload;
  return out;
}

void MessageReader::feed(std::string_view bytes) {
  if (head_ > 0 && head_ >= buffer_.size() / 2) {
    buffer_.erase(0, head_);
    head_ = 0;
  }
  buffer_.append(bytes);
}

std::optional<Message> MessageReader::next() {
  if (pending() < 4) return std::nullopt;
  const auto byte = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(buffer_[head_ + i])); };
  const std::uint32_t body = (byte(0) << 24) | (byte(1) << 16) | (byte(2) << 8) | byte(3);
  if (body == 0) throw FramingError(consumed_, "empty message (missing tag)");
  if (body > kMaxMessageSize) throw FramingError(consumed_, "declared length " + std::to_string(body) + " too large");
  if (pending() < 4 + static_cast<std::size_t>(body)) return std::nullopt;

  const auto type = message_type_from_tag(buffer_[head_ + 4]);
  if (!type) throw FramingError(consumed_, "unknown message tag");
  Message m{*type, buffer_.substr(head_ + 5, body - 1)};
  head_ += 4 + body;
  consumed_ += 4 + body;
  return m;
}

}  // namespace slides::protocol

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "softslides/framing.hpp"
#include "softslides/session.hpp"

namespace slides::protocol {

/// Bidirectional byte stream.
class ByteStream {
 public:
  enum class ReadStatus { Data, Timeout, Closed };
  struct ReadResult {
    ReadStatus status = ReadStatus::Closed;
    std::size_t bytes = 0;
  };

  virtual ~ByteStream() = default;
  virtual ReadResult read_some(std::span<char> buffer, std::chrono::milliseconds timeout) = 0;
  /// False once the peer is gone.
  virtual bool write_all(std::string_view bytes) = 0;
};

/// POSIX descriptors; `in` and `out` may be the same socket. Does not own
/// the descriptors.
class FdStream : public ByteStream {
 public:
  FdStream(int in_fd, int out_fd);
  ReadResult read_some(std::span<char> buffer, std::chrono::milliseconds timeout) override;
  bool write_all(std::string_view bytes) override;

 private:
  int in_;
  int out_;
  bool out_is_socket_;
};

/// Owns a socket descriptor.
class Socket {
 public:
  explicit Socket(int fd = -1) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.release()) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  int fd() const { return fd_; }
  int release() {
    const int f = fd_;
    fd_ = -1;
    return f;
  }

 private:
  int fd_;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Listening TCP socket on host:port (port 0 picks a free port).
Socket listen_tcp(const std::string& host, std::uint16_t port);
std::uint16_t local_port(const Socket& listener);
Socket accept_client(const Socket& listener);
/// Connected pair for in-process channels and tests.
std::pair<Socket, Socket> socket_pair();

struct ServeOptions {
  /// Zero runs ticks back to back.
  std::chrono::microseconds tick_period{16667};
  std::optional<std::uint64_t> max_ticks;
  /// Sees every received command and every emitted frame, in stream order.
  std::function<void(const Message&)> record;
};

enum class ServeEnd { TransportClosed, TickLimit, WriteFailed, FramingBroken };

struct ServeSummary {
  std::uint64_t frames = 0;
  std::uint64_t commands = 0;
  std::uint64_t errors = 0;
  ServeEnd end = ServeEnd::TransportClosed;
};

/// Runs the session over `stream`: emits the current snapshot, then each
/// tick applies queued commands in arrival order, advances, and emits one
/// frame. Rejected commands get an Error message. Returns when the peer
/// disconnects, a write fails, or max_ticks frames after the first were sent.
ServeSummary serve(Session& session, ByteStream& stream, const ServeOptions& options);

/// Error reply payload: {"error":"<text>"}.
std::string encode_error(std::string_view text);

}  // namespace slides::protocol

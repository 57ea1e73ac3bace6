#include "softslides/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "softslides/frame.hpp"

namespace slides::protocol {

namespace {

bool is_socket(int fd) {
  struct stat st {};
  return fstat(fd, &st) == 0 && S_ISSOCK(st.st_mode);
}

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

FdStream::FdStream(int in_fd, int out_fd) : in_(in_fd), out_(out_fd), out_is_socket_(is_socket(out_fd)) {}

ByteStream::ReadResult FdStream::read_some(std::span<char> buffer, std::chrono::milliseconds timeout) {
  pollfd p{in_, POLLIN, 0};
  const int ready = ::poll(&p, 1, static_cast<int>(timeout.count()));
  if (ready == 0) return {ReadStatus::Timeout, 0};
  if (ready < 0) {
    if (errno == EINTR) return {ReadStatus::Timeout, 0};
    return {ReadStatus::Closed, 0};
  }
  const ssize_t n = ::read(in_, buffer.data(), buffer.size());
  if (n > 0) return {ReadStatus::Data, static_cast<std::size_t>(n)};
  if (n < 0 && (errno == EINTR || errno == EAGAIN)) return {ReadStatus::Timeout, 0};
  return {ReadStatus::Closed, 0};
}

bool FdStream::write_all(std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = out_is_socket_ ? ::send(out_, bytes.data(), bytes.size(), MSG_NOSIGNAL)
                                     : ::write(out_, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = o.release();
  }
  return *this;
}

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

Socket listen_tcp(const std::string& host, std::uint16_t port) {
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (s.fd() < 0) throw TransportError(errno_text("socket"));
  const int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) throw TransportError("bad IPv4 address '" + host + "'");
  if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) throw TransportError(errno_text("bind"));
  if (::listen(s.fd(), 1) != 0) throw TransportError(errno_text("listen"));
  return s;
}

std::uint16_t local_port(const Socket& listener) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(listener.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw TransportError(errno_text("getsockname"));
  }
  return ntohs(addr.sin_port);
}

Socket accept_client(const Socket& listener) {
  while (true) {
    const int fd = ::accept(listener.fd(), nullptr, nullptr);
    if (fd >= 0) return Socket(fd);
    if (errno != EINTR) throw TransportError(errno_text("accept"));
  }
}

std::pair<Socket, Socket> socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) throw TransportError(errno_text("socketpair"));
  return {Socket(fds[0]), Socket(fds[1])};
}

std::string encode_error(std::string_view text) { return "{\"error\":" + quote(text) + "}"; }

ServeSummary serve(Session& session, ByteStream& stream, const ServeOptions& options) {
  std::mutex mutex;
  std::deque<Message> inbox;
  std::atomic<bool> closed{false};
  std::atomic<bool> broken{false};
  std::atomic<bool> stop{false};

  std::thread reader([&] {
    MessageReader decoder;
    std::string buffer(4096, '\0');
    while (!stop.load()) {
      const auto r = stream.read_some(buffer, std::chrono::milliseconds(20));
      if (r.status == ByteStream::ReadStatus::Timeout) continue;
      if (r.status == ByteStream::ReadStatus::Closed) break;
      decoder.feed(std::string_view(buffer.data(), r.bytes));
      try {
        while (auto m = decoder.next()) {
          const std::lock_guard lock(mutex);
          inbox.push_back(std::move(*m));
        }
      } catch (const FramingError&) {
        broken.store(true);
        break;
      }
    }
    closed.store(true);
  });

  ServeSummary summary;
  auto emit = [&](const Message& m) {
    if (options.record && m.type != MessageType::Error) options.record(m);
    return stream.write_all(frame_message(m));
  };

  auto finish = [&](ServeEnd end) {
    stop.store(true);
    reader.join();
    summary.end = end;
    return summary;
  };

  if (!emit({MessageType::Frame, encode_frame(session.snapshot())})) return finish(ServeEnd::WriteFailed);
  ++summary.frames;

  auto deadline = std::chrono::steady_clock::now();
  std::uint64_t ticks = 0;
  while (true) {
    if (options.max_ticks && ticks >= *options.max_ticks) return finish(ServeEnd::TickLimit);
    if (options.tick_period.count() > 0) {
      deadline += options.tick_period;
      std::this_thread::sleep_until(deadline);
    }
    // Check before draining so a frame is never emitted after the peer left.
    const bool peer_gone = closed.load();

    std::deque<Message> batch;
    {
      const std::lock_guard lock(mutex);
      batch.swap(inbox);
    }
    if (broken.load()) {
      emit({MessageType::Error, encode_error("framing error; closing session")});
      return finish(ServeEnd::FramingBroken);
    }
    if (peer_gone && batch.empty()) return finish(ServeEnd::TransportClosed);

    for (const auto& m : batch) {
      if (m.type != MessageType::Command) {
        ++summary.errors;
        if (!emit({MessageType::Error, encode_error("only command messages are accepted")})) {
          return finish(ServeEnd::WriteFailed);
        }
        continue;
      }
      ++summary.commands;
      if (options.record) options.record(m);
      if (const auto err = session.apply_encoded(m.payload)) {
        ++summary.errors;
        if (!stream.write_all(frame_message({MessageType::Error, encode_error(*err)}))) {
          return finish(ServeEnd::WriteFailed);
        }
      }
    }

    if (!emit({MessageType::Frame, encode_frame(session.advance())})) return finish(ServeEnd::WriteFailed);
    ++summary.frames;
    ++ticks;
  }
}

}  // namespace slides::protocol

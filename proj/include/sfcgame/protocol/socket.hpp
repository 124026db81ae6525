#pragma once

// TCP transport carrying the line protocol. The leader listens, each RU
// connects and introduces itself with HELLO <ru_id>; after that every
// message is one '\n'-terminated line. POSIX only.

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <utility>

#include "sfcgame/protocol/transport.hpp"

namespace sfcgame::protocol {

struct SocketError : Error {
  using Error::Error;
};

struct Address {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

/// "host:port"; the host part may be empty (127.0.0.1).
inline Address parse_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw SocketError("address must be host:port");
  const auto port = parse_integer<std::uint16_t>(text.substr(colon + 1));
  if (!port) throw SocketError("bad port in address '" + std::string(text) + "'");
  Address a;
  if (colon > 0) a.host = std::string(text.substr(0, colon));
  a.port = *port;
  return a;
}

/// Owning file descriptor.
class Fd {
public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }

  int get() const noexcept { return fd_; }
  explicit operator bool() const noexcept { return fd_ >= 0; }
  void reset() noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

private:
  int fd_ = -1;
};

namespace detail {

inline std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

struct AddrInfoDeleter {
  void operator()(addrinfo* p) const noexcept { ::freeaddrinfo(p); }
};

inline std::unique_ptr<addrinfo, AddrInfoDeleter> resolve(const Address& a, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(a.port);
  if (int rc = ::getaddrinfo(a.host.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw SocketError("cannot resolve '" + a.host + "': " + ::gai_strerror(rc));
  return std::unique_ptr<addrinfo, AddrInfoDeleter>(res);
}

}  // namespace detail

/// A connected stream split into lines.
class LineStream {
public:
  explicit LineStream(Fd fd) : fd_(std::move(fd)) {
    int one = 1;
    ::setsockopt(fd_.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  }

  int fd() const noexcept { return fd_.get(); }

  void send_line(const std::string& line) {
    const std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd_.get(), data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw SocketError(detail::errno_text("send"));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  /// A complete line already buffered, without its terminator.
  std::optional<std::string> take_line() {
    const auto nl = buffer_.find('\n');
    if (nl == std::string::npos) return std::nullopt;
    std::string line = buffer_.substr(0, nl);
    buffer_.erase(0, nl + 1);
    return line;
  }

  /// Reads whatever is available. Returns false on end of stream.
  bool fill() {
    char chunk[4096];
    for (;;) {
      const ssize_t n = ::recv(fd_.get(), chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n < 0) throw SocketError(detail::errno_text("recv"));
      if (n == 0) return false;
      buffer_.append(chunk, static_cast<std::size_t>(n));
      return true;
    }
  }

  /// Blocks up to `timeout` for one line.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (auto line = take_line()) return line;
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) return std::nullopt;
      pollfd p{fd_.get(), POLLIN, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) throw SocketError(detail::errno_text("poll"));
      if (rc == 0) return std::nullopt;
      if (!fill()) throw SocketError("connection closed by peer");
    }
  }

private:
  Fd fd_;
  std::string buffer_;
};

class SocketLeaderTransport : public LeaderTransport {
public:
  /// Binds and listens; port 0 picks an ephemeral port (see port()).
  explicit SocketLeaderTransport(const Address& addr) {
    auto info = detail::resolve(addr, true);
    listener_ = Fd(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
    if (!listener_) throw SocketError(detail::errno_text("socket"));
    int one = 1;
    ::setsockopt(listener_.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(listener_.get(), info->ai_addr, info->ai_addrlen) != 0)
      throw SocketError(detail::errno_text("bind"));
    if (::listen(listener_.get(), 64) != 0) throw SocketError(detail::errno_text("listen"));
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listener_.get(), reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
  }

  std::uint16_t port() const noexcept { return port_; }

  /// Accepts connections until `expected` distinct RUs have said HELLO.
  /// A duplicate id aborts the whole session.
  void accept_peers(std::size_t expected, std::chrono::milliseconds timeout) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + timeout;
    while (peers_.size() < expected) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
      if (left.count() <= 0) break;
      pollfd p{listener_.get(), POLLIN, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) throw SocketError(detail::errno_text("poll"));
      if (rc == 0) break;
      Fd conn(::accept(listener_.get(), nullptr, nullptr));
      if (!conn) continue;
      auto stream = std::make_unique<LineStream>(std::move(conn));
      const auto left2 = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
      std::optional<std::string> line;
      try {
        line = stream->read_line(std::max(left2, std::chrono::milliseconds(1)));
      } catch (const SocketError&) {
        continue;
      }
      if (!line) continue;
      Message msg;
      try {
        msg = decode(*line);
      } catch (const DecodeError&) {
        stream->send_line(encode(Abort{"expected_hello"}));
        continue;
      }
      const auto* hello = std::get_if<Hello>(&msg);
      if (!hello) {
        stream->send_line(encode(Abort{"expected_hello"}));
        continue;
      }
      if (peers_.contains(hello->ru_id)) {
        const int dup = hello->ru_id;
        try {
          stream->send_line(encode(Abort{"duplicate_ru_id"}));
        } catch (const SocketError&) {
        }
        broadcast_quietly(Abort{"duplicate_ru_id"});
        throw ProtocolError("duplicate_ru_id", 0, dup);
      }
      peers_.emplace(hello->ru_id, std::move(stream));
    }
  }

  std::vector<int> peers() const override {
    std::vector<int> ids;
    for (const auto& [id, s] : peers_) ids.push_back(id);
    return ids;
  }

  void send(int ru_id, const Message& msg) override {
    auto it = peers_.find(ru_id);
    if (it == peers_.end()) throw ProtocolError("unknown_peer", 0, ru_id);
    it->second->send_line(encode(msg));
  }

  std::optional<Inbound> receive(std::chrono::milliseconds timeout) override {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + timeout;
    for (;;) {
      for (auto& [id, s] : peers_)
        if (auto line = s->take_line()) return Inbound{id, decode_from(id, *line)};

      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
      if (left.count() <= 0) return std::nullopt;
      std::vector<pollfd> fds;
      std::vector<int> ids;
      for (auto& [id, s] : peers_) {
        fds.push_back({s->fd(), POLLIN, 0});
        ids.push_back(id);
      }
      const int rc = ::poll(fds.data(), fds.size(), static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) throw SocketError(detail::errno_text("poll"));
      if (rc == 0) return std::nullopt;
      // Take the first readable peer only, so lines surface in arrival order.
      for (std::size_t i = 0; i < fds.size(); ++i) {
        if (fds[i].revents == 0) continue;
        if (!peers_.at(ids[i])->fill())
          throw ProtocolError("peer_disconnected", 0, ids[i]);
        break;
      }
    }
  }

private:
  static Message decode_from(int id, const std::string& line) {
    try {
      return decode(line);
    } catch (const DecodeError&) {
      throw ProtocolError("malformed_message", 0, id);
    }
  }

  void broadcast_quietly(const Message& msg) {
    for (auto& [id, s] : peers_) {
      try {
        s->send_line(encode(msg));
      } catch (const SocketError&) {
      }
    }
  }

  Fd listener_;
  std::uint16_t port_ = 0;
  std::map<int, std::unique_ptr<LineStream>> peers_;
};

class SocketFollowerTransport : public FollowerTransport {
public:
  /// Retries the connection until `timeout`, then sends HELLO.
  SocketFollowerTransport(const Address& addr, int ru_id, std::chrono::milliseconds timeout) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + timeout;
    auto info = detail::resolve(addr, false);
    for (;;) {
      Fd fd(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
      if (!fd) throw SocketError(detail::errno_text("socket"));
      if (::connect(fd.get(), info->ai_addr, info->ai_addrlen) == 0) {
        stream_ = std::make_unique<LineStream>(std::move(fd));
        break;
      }
      if (clock::now() >= deadline)
        throw SocketError("cannot connect to " + addr.host + ":" + std::to_string(addr.port) +
                          ": " + std::strerror(errno));
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    stream_->send_line(encode(Hello{ru_id}));
  }

  void send(const Message& msg) override { stream_->send_line(encode(msg)); }

  /// Throws DecodeError on a malformed line.
  std::optional<Message> receive(std::chrono::milliseconds timeout) override {
    auto line = stream_->read_line(timeout);
    if (!line) return std::nullopt;
    return decode(*line);
  }

private:
  std::unique_ptr<LineStream> stream_;
};

}  // namespace sfcgame::protocol

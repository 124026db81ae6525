#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "sfcgame/protocol/message.hpp"

namespace sfcgame::protocol {

/// Session-level failure. `round` is the sweep round in progress (0 before
/// the first price goes out); `ru_id` names the offending peer when known.
class ProtocolError : public Error {
public:
  ProtocolError(std::string what, std::uint64_t round, std::optional<int> ru_id = std::nullopt)
      : Error(render(what, round, ru_id)), reason_(std::move(what)), round_(round), ru_id_(ru_id) {}

  const std::string& reason() const noexcept { return reason_; }
  std::uint64_t round() const noexcept { return round_; }
  std::optional<int> ru_id() const noexcept { return ru_id_; }

private:
  static std::string render(const std::string& what, std::uint64_t round, std::optional<int> id) {
    std::string s = what + " (round " + std::to_string(round);
    if (id) s += ", ru " + std::to_string(*id);
    return s + ")";
  }

  std::string reason_;
  std::uint64_t round_;
  std::optional<int> ru_id_;
};

struct Inbound {
  int from = 0;  // ru id of the sending peer
  Message msg;
};

/// Leader end of a star: ordered, reliable delivery per peer.
class LeaderTransport {
public:
  virtual ~LeaderTransport() = default;

  /// Ids of connected followers, ascending.
  virtual std::vector<int> peers() const = 0;
  virtual void send(int ru_id, const Message& msg) = 0;
  /// Next message from any peer, or nullopt once `timeout` has passed.
  virtual std::optional<Inbound> receive(std::chrono::milliseconds timeout) = 0;

  void broadcast(const Message& msg) {
    for (int id : peers()) send(id, msg);
  }
};

class FollowerTransport {
public:
  virtual ~FollowerTransport() = default;
  virtual void send(const Message& msg) = 0;
  virtual std::optional<Message> receive(std::chrono::milliseconds timeout) = 0;
};

/// Records every message crossing a leader transport, encoded, as
/// "<ru_id> > LINE" (leader to RU) or "<ru_id> < LINE" (RU to leader).
class RecordingLeaderTransport : public LeaderTransport {
public:
  explicit RecordingLeaderTransport(LeaderTransport& inner) : inner_(inner) {}

  std::vector<int> peers() const override { return inner_.peers(); }
  void send(int ru_id, const Message& msg) override {
    lines_.push_back(std::to_string(ru_id) + " > " + encode(msg));
    inner_.send(ru_id, msg);
  }
  std::optional<Inbound> receive(std::chrono::milliseconds timeout) override {
    auto in = inner_.receive(timeout);
    if (in) lines_.push_back(std::to_string(in->from) + " < " + encode(in->msg));
    return in;
  }

  const std::vector<std::string>& transcript() const noexcept { return lines_; }

private:
  LeaderTransport& inner_;
  std::vector<std::string> lines_;
};

}  // namespace sfcgame::protocol

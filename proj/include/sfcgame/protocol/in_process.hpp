#pragma once

// Deterministic single-threaded transport. Followers live inside the
// network and are stepped whenever the leader waits for input; the order
// in which they are stepped (and so the arrival order of their offers) is
// ascending, reversed, or a seeded shuffle.

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "sfcgame/protocol/session.hpp"
#include "sfcgame/rng.hpp"

namespace sfcgame::protocol {

enum class ArrivalOrder { ascending, reversed, shuffled };

class InProcessNetwork : public LeaderTransport {
public:
  explicit InProcessNetwork(ArrivalOrder order = ArrivalOrder::ascending, std::uint64_t seed = 0)
      : order_(order), rng_(seed) {}

  /// A silent follower receives messages but never answers.
  void add_follower(const RuParams& ru, bool responsive = true) {
    if (nodes_.contains(ru.id))
      throw ProtocolError("duplicate_ru_id", 0, ru.id);
    nodes_.emplace(ru.id, Node{FollowerAgent(ru), {}, responsive});
  }

  std::vector<int> peers() const override {
    std::vector<int> ids;
    for (const auto& [id, n] : nodes_) ids.push_back(id);
    return ids;
  }

  void send(int ru_id, const Message& msg) override {
    auto it = nodes_.find(ru_id);
    if (it == nodes_.end()) throw ProtocolError("unknown_peer", 0, ru_id);
    transcript_.push_back(std::to_string(ru_id) + " > " + encode(msg));
    it->second.inbox.push_back(msg);
  }

  /// Never blocks: steps every follower once and returns the first queued
  /// reply, or nullopt when nobody has anything to say.
  std::optional<Inbound> receive(std::chrono::milliseconds) override {
    if (outbox_.empty()) pump();
    if (outbox_.empty()) return std::nullopt;
    Inbound in = std::move(outbox_.front());
    outbox_.pop_front();
    return in;
  }

  /// Delivers anything still queued (such as the final EQ) first.
  const FollowerLog& follower_log(int id) {
    pump();
    return nodes_.at(id).agent.log();
  }
  /// Every message, encoded: "<ru_id> > LINE" leader to RU, "<ru_id> < LINE" back.
  const std::vector<std::string>& transcript() const noexcept { return transcript_; }

private:
  struct Node {
    FollowerAgent agent;
    std::deque<Message> inbox;
    bool responsive = true;
  };

  void pump() {
    std::vector<int> ids = peers();
    if (order_ == ArrivalOrder::reversed) std::reverse(ids.begin(), ids.end());
    if (order_ == ArrivalOrder::shuffled) {
      for (std::size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[static_cast<std::size_t>(uniform01(rng_) * static_cast<double>(i))]);
    }
    for (int id : ids) {
      Node& node = nodes_.at(id);
      while (!node.inbox.empty()) {
        const Message msg = std::move(node.inbox.front());
        node.inbox.pop_front();
        if (!node.responsive || node.agent.finished()) continue;
        std::optional<Message> reply;
        try {
          reply = node.agent.handle(msg);
        } catch (const ProtocolError& e) {
          reply = Abort{e.reason()};
        }
        if (reply) {
          transcript_.push_back(std::to_string(id) + " < " + encode(*reply));
          outbox_.push_back({id, std::move(*reply)});
        }
      }
    }
  }

  ArrivalOrder order_;
  Rng rng_;
  std::map<int, Node> nodes_;
  std::deque<Inbound> outbox_;
  std::vector<std::string> transcript_;
};

}  // namespace sfcgame::protocol

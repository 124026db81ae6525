#pragma once

// Round-based negotiation. The leader announces each swept price, waits
// for one offer per RU, prices the round, and finally announces the
// equilibrium. RUs only ever send their offer; k, e_gen and e_min stay local.

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfcgame/follower.hpp"
#include "sfcgame/leader.hpp"
#include "sfcgame/protocol/transport.hpp"

namespace sfcgame::protocol {

/// What the facility controller knows: no private RU data.
struct LeaderView {
  double e_req = 0.0;
  double grid_sell = 0.0;
  double grid_buy = 0.0;
  std::size_t expected_rus = 0;
  SweepConfig sweep;
};

inline LeaderView leader_view(const Scenario& s, const SweepConfig& sweep = {}) {
  validate_scenario(s);
  return {s.e_req, s.grid_sell, s.grid_buy, s.rus.size(), sweep};
}

struct RoundRecord {
  std::uint64_t round = 0;
  double price = 0.0;
  double total_offer = 0.0;
  double cost = 0.0;
  double best_price = 0.0;
  double best_cost = 0.0;
  std::vector<int> arrival_order;  // ru ids in the order offers arrived
};

struct SessionOutcome {
  double price = 0.0;
  double cost = 0.0;
  std::map<int, double> offers;  // by ru id, at the winning round
  bool surplus = false;
  std::vector<RoundRecord> rounds;
};

struct LeaderOptions {
  std::chrono::milliseconds round_timeout{5000};
};

namespace detail {

[[noreturn]] inline void abort_session(LeaderTransport& t, const std::string& reason,
                                       std::uint64_t round, std::optional<int> ru_id) {
  try {
    t.broadcast(Abort{reason});
  } catch (const Error&) {
    // peers may already be gone
  }
  throw ProtocolError(reason, round, ru_id);
}

}  // namespace detail

inline SessionOutcome run_leader(const LeaderView& view, LeaderTransport& transport,
                                 const LeaderOptions& opts = {}) {
  using clock = std::chrono::steady_clock;
  const PriceGrid grid = make_price_grid(view.grid_buy, view.grid_sell, view.sweep);
  const std::vector<int> peers = transport.peers();
  if (peers.size() != view.expected_rus)
    detail::abort_session(transport,
                          "expected_" + std::to_string(view.expected_rus) + "_rus_got_" +
                              std::to_string(peers.size()),
                          0, std::nullopt);

  SessionOutcome out;
  out.cost = view.e_req * view.grid_sell;
  out.rounds.reserve(grid.size());

  for (std::uint64_t round = 0; round < grid.size(); ++round) {
    const double price = grid[round];
    transport.broadcast(PriceAnnounce{round, price});

    std::map<int, double> offers;
    RoundRecord rec;
    rec.round = round;
    rec.price = price;
    const auto deadline = clock::now() + opts.round_timeout;
    while (offers.size() < peers.size()) {
      const auto left =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
      std::optional<Inbound> in;
      if (left.count() > 0) {
        try {
          in = transport.receive(left);
        } catch (const ProtocolError& e) {
          detail::abort_session(transport, e.reason(), round, e.ru_id());
        }
      }
      if (!in) {
        int missing = -1;
        for (int id : peers)
          if (!offers.contains(id)) {
            missing = id;
            break;
          }
        detail::abort_session(transport, "offer_timeout", round, missing);
      }
      if (const auto* a = std::get_if<Abort>(&in->msg))
        detail::abort_session(transport, "peer_abort_" + a->reason, round, in->from);
      const auto* offer = std::get_if<EnergyOffer>(&in->msg);
      if (!offer) detail::abort_session(transport, "unexpected_message", round, in->from);
      if (offer->round != round)
        detail::abort_session(transport, "wrong_round", round, in->from);
      if (offer->ru_id != in->from)
        detail::abort_session(transport, "ru_id_mismatch", round, in->from);
      if (!offers.emplace(in->from, offer->offer).second)
        detail::abort_session(transport, "duplicate_offer", round, in->from);
      rec.arrival_order.push_back(in->from);
    }

    // Summed in ascending id order.
    double total = 0.0;
    for (const auto& [id, v] : offers) total += v;
    rec.total_offer = total;
    rec.cost = sfc_cost_from_total(view.e_req, view.grid_sell, total, price);
    if (rec.cost <= out.cost) {
      out.price = price;
      out.cost = rec.cost;
      out.offers = std::move(offers);
      out.surplus = total > view.e_req;
    }
    rec.best_price = out.price;
    rec.best_cost = out.cost;
    out.rounds.push_back(std::move(rec));
  }

  transport.broadcast(Equilibrium{out.price, out.cost});
  return out;
}

struct FollowerLog {
  struct Entry {
    std::uint64_t round = 0;
    double price = 0.0;
    double offer = 0.0;
  };
  std::vector<Entry> rounds;
  std::optional<Equilibrium> result;
  std::optional<std::string> aborted;  // reason sent by the leader

  bool finished() const noexcept { return result.has_value() || aborted.has_value(); }
};

/// Follower state machine shared by every transport.
class FollowerAgent {
public:
  explicit FollowerAgent(RuParams ru) : ru_(ru) {}

  int id() const noexcept { return ru_.id; }
  const FollowerLog& log() const noexcept { return log_; }
  bool finished() const noexcept { return log_.finished(); }

  /// Returns the reply to send, if any. Throws ProtocolError on anything a
  /// follower should not receive.
  std::optional<Message> handle(const Message& msg) {
    if (finished()) throw ProtocolError("message_after_end", last_round(), ru_.id);
    if (const auto* p = std::get_if<PriceAnnounce>(&msg)) {
      if (!log_.rounds.empty() && p->round <= log_.rounds.back().round)
        throw ProtocolError("non_increasing_round", p->round, ru_.id);
      if (!(p->price > 0.0)) throw ProtocolError("nonpositive_price", p->round, ru_.id);
      const double offer = best_response(ru_, p->price).offer;
      log_.rounds.push_back({p->round, p->price, offer});
      return EnergyOffer{p->round, ru_.id, offer};
    }
    if (const auto* eq = std::get_if<Equilibrium>(&msg)) {
      log_.result = *eq;
      return std::nullopt;
    }
    if (const auto* a = std::get_if<Abort>(&msg)) {
      log_.aborted = a->reason;
      return std::nullopt;
    }
    throw ProtocolError("unexpected_message", last_round(), ru_.id);
  }

private:
  std::uint64_t last_round() const noexcept {
    return log_.rounds.empty() ? 0 : log_.rounds.back().round;
  }

  RuParams ru_;
  FollowerLog log_;
};

struct FollowerOptions {
  std::chrono::milliseconds idle_timeout{30000};
  /// Called before each offer is sent; used to inject arrival jitter.
  std::function<void()> before_reply;
};

/// Answers price announcements until the leader ends the session. A
/// malformed or unexpected message makes the follower send ABORT and throw.
inline FollowerLog run_follower(const RuParams& ru, FollowerTransport& transport,
                                const FollowerOptions& opts = {}) {
  FollowerAgent agent(ru);
  while (!agent.finished()) {
    std::optional<Message> in;
    try {
      in = transport.receive(opts.idle_timeout);
    } catch (const DecodeError& e) {
      transport.send(Abort{"malformed_message"});
      throw ProtocolError(std::string("malformed_message: ") + e.what(),
                          agent.log().rounds.empty() ? 0 : agent.log().rounds.back().round,
                          ru.id);
    }
    if (!in) throw ProtocolError("leader_silent", agent.log().rounds.size(), ru.id);
    std::optional<Message> reply;
    try {
      reply = agent.handle(*in);
    } catch (const ProtocolError& e) {
      transport.send(Abort{e.reason()});
      throw;
    }
    if (reply) {
      if (opts.before_reply) opts.before_reply();
      transport.send(*reply);
    }
  }
  return agent.log();
}

}  // namespace sfcgame::protocol

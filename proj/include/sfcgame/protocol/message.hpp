#pragma once

// Messages exchanged between the facility controller and the RUs, and their
// newline-free line encoding:
//
//   HELLO <ru_id>
//   PRICE <round> <price>
//   OFFER <round> <ru_id> <kwh>
//   EQ <price> <cost>
//   ABORT <reason-token>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sfcgame/number_format.hpp"
#include "sfcgame/types.hpp"

namespace sfcgame::protocol {

struct Hello {
  int ru_id = 0;
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct PriceAnnounce {
  std::uint64_t round = 0;
  double price = 0.0;
  friend bool operator==(const PriceAnnounce&, const PriceAnnounce&) = default;
};

struct EnergyOffer {
  std::uint64_t round = 0;
  int ru_id = 0;
  double offer = 0.0;
  friend bool operator==(const EnergyOffer&, const EnergyOffer&) = default;
};

struct Equilibrium {
  double price = 0.0;
  double cost = 0.0;
  friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

struct Abort {
  std::string reason;  // single token, no whitespace
  friend bool operator==(const Abort&, const Abort&) = default;
};

using Message = std::variant<Hello, PriceAnnounce, EnergyOffer, Equilibrium, Abort>;

struct DecodeError : Error {
  using Error::Error;
};

/// Replaces anything that would break the one-token reason field.
inline std::string reason_token(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.' || c == '=';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "unspecified" : out;
}

inline std::string encode(const Message& msg) {
  struct Visitor {
    std::string operator()(const Hello& m) const { return "HELLO " + std::to_string(m.ru_id); }
    std::string operator()(const PriceAnnounce& m) const {
      return "PRICE " + std::to_string(m.round) + " " + format_number(m.price);
    }
    std::string operator()(const EnergyOffer& m) const {
      return "OFFER " + std::to_string(m.round) + " " + std::to_string(m.ru_id) + " " +
             format_number(m.offer);
    }
    std::string operator()(const Equilibrium& m) const {
      return "EQ " + format_number(m.price) + " " + format_number(m.cost);
    }
    std::string operator()(const Abort& m) const { return "ABORT " + reason_token(m.reason); }
  };
  return std::visit(Visitor{}, msg);
}

namespace detail {

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    out.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline double number_field(std::string_view tok, std::string_view what) {
  auto v = parse_number(tok);
  if (!v) throw DecodeError("bad " + std::string(what) + " '" + std::string(tok) + "'");
  return *v;
}

template <typename Int>
Int integer_field(std::string_view tok, std::string_view what) {
  auto v = parse_integer<Int>(tok);
  if (!v) throw DecodeError("bad " + std::string(what) + " '" + std::string(tok) + "'");
  return *v;
}

}  // namespace detail

/// Parses one line (a trailing '\r' or '\n' is tolerated). Rejects unknown
/// tags, wrong arity, non-finite numbers and negative offers.
inline Message decode(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  const auto tok = detail::split_spaces(line);
  const std::string_view tag = tok.front();
  auto arity = [&](std::size_t n) {
    if (tok.size() != n + 1)
      throw DecodeError(std::string(tag) + " expects " + std::to_string(n) + " fields, got " +
                        std::to_string(tok.size() - 1));
  };
  using detail::integer_field;
  using detail::number_field;
  if (tag == "HELLO") {
    arity(1);
    return Hello{integer_field<int>(tok[1], "ru_id")};
  }
  if (tag == "PRICE") {
    arity(2);
    return PriceAnnounce{integer_field<std::uint64_t>(tok[1], "round"),
                         number_field(tok[2], "price")};
  }
  if (tag == "OFFER") {
    arity(3);
    EnergyOffer m{integer_field<std::uint64_t>(tok[1], "round"),
                  integer_field<int>(tok[2], "ru_id"), number_field(tok[3], "offer")};
    if (m.offer < 0.0) throw DecodeError("negative offer");
    return m;
  }
  if (tag == "EQ") {
    arity(2);
    return Equilibrium{number_field(tok[1], "price"), number_field(tok[2], "cost")};
  }
  if (tag == "ABORT") {
    arity(1);
    if (tok[1].empty()) throw DecodeError("empty abort reason");
    return Abort{std::string(tok[1])};
  }
  throw DecodeError("unknown message tag '" + std::string(tag) + "'");
}

}  // namespace sfcgame::protocol

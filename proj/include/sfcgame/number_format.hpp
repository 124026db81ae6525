#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace sfcgame {

/// Fixed notation with at least six decimals. When six decimals would not
/// read back to the same double, the shortest fixed form that does is used
/// instead. std::to_chars is exactly specified, so output bytes do not vary
/// across platforms.
inline std::string format_number(double v) {
  std::array<char, 512> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed, 6);
  if (ec != std::errc{}) return std::to_string(v);
  std::string six(buf.data(), end);

  double back = 0.0;
  std::from_chars(six.data(), six.data() + six.size(), back);
  if (back == v) return six;

  auto [end2, ec2] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
  if (ec2 != std::errc{}) return six;
  return std::string(buf.data(), end2);
}

/// Strict parse: the whole token must be a finite decimal number.
inline std::optional<double> parse_number(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = tok.data();
  if (*first == '+') return std::nullopt;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_integer(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  Int v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

}  // namespace sfcgame

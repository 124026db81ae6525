#pragma once

// Follower side: each RU's utility-maximizing consumption for an
// announced price, in closed form and by exhaustive grid evaluation.

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <utility>
#include <vector>

#include "sfcgame/game_core.hpp"

namespace sfcgame {

enum class Boundary { interior, clamped_low, clamped_high };

inline std::string_view to_string(Boundary b) noexcept {
  switch (b) {
    case Boundary::interior: return "interior";
    case Boundary::clamped_low: return "clamped_low";
    case Boundary::clamped_high: return "clamped_high";
  }
  return "?";
}

struct BestResponse {
  double e_star = 0.0;
  double offer = 0.0;  // e_gen - e_star
  double utility = 0.0;
  Boundary boundary = Boundary::interior;
};

/// Stationary point of k ln(1+e) - price e is e = k/price - 1; the utility is
/// strictly concave, so projecting onto [e_min, e_gen] gives the maximizer.
/// A stationary point sitting exactly on a bound counts as interior.
inline BestResponse best_response(const RuParams& ru, double price) {
  if (!(price > 0.0) || !std::isfinite(price))
    throw DomainError("announced price must be positive and finite");
  const double stationary = ru.k / price - 1.0;
  BestResponse r;
  if (stationary < ru.e_min) {
    r.e_star = ru.e_min;
    r.boundary = Boundary::clamped_low;
  } else if (stationary > ru.e_gen) {
    r.e_star = ru.e_gen;
    r.boundary = Boundary::clamped_high;
  } else {
    r.e_star = stationary;
  }
  r.offer = ru.e_gen - r.e_star;
  r.utility = ru_utility(ru, r.e_star, price);
  return r;
}

/// Evaluates the utility at every point of {e_min, e_min+step, ..., e_gen}
/// and returns the grid argmax (first one on ties). Independent of the
/// closed form; used to check it.
///
/// ln(1+e) is taken per block as log1p(block start) plus a degree-7 series
/// in the in-block relative offset x <= 1e-3, so the truncation error stays
/// below 1e-24 relative while the scan remains exhaustive.
inline BestResponse best_response_oracle(const RuParams& ru, double price, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("grid step must be positive");
  if (!(price > 0.0) || !std::isfinite(price))
    throw DomainError("announced price must be positive and finite");

  constexpr std::size_t kMaxBlock = 64;
  const auto last = static_cast<std::size_t>(std::floor((ru.e_gen - ru.e_min) / step));
  const std::size_t block =
      std::clamp<std::size_t>(static_cast<std::size_t>(1e-3 / step), 1, kMaxBlock);

  std::array<double, kMaxBlock> offsets{};
  for (std::size_t j = 0; j < block; ++j) offsets[j] = static_cast<double>(j) * step;

  // Only the e-dependent part k ln(1+e) - price e is compared.
  double best = -HUGE_VAL;
  double best_e = ru.e_min;
  std::array<double, kMaxBlock> vals{};
  for (std::size_t start = 0; start <= last; start += block) {
    const std::size_t count = std::min(block, last + 1 - start);
    const double e0 = ru.e_min + static_cast<double>(start) * step;
    const double base = ru.k * std::log1p(e0) - price * e0;
    const double inv = 1.0 / (1.0 + e0);
    double block_max = -HUGE_VAL;
    for (std::size_t j = 0; j < block; ++j) {
      const double x = offsets[j] * inv;
      const double ln =
          x * (1.0 - x * (1.0 / 2 - x * (1.0 / 3 - x * (1.0 / 4 - x * (1.0 / 5 -
               x * (1.0 / 6 - x * (1.0 / 7)))))));
      vals[j] = base + (ru.k * ln - price * offsets[j]);
    }
    for (std::size_t j = 0; j < count; ++j) block_max = std::max(block_max, vals[j]);
    if (block_max > best) {
      for (std::size_t j = 0; j < count; ++j) {
        if (vals[j] > best) {
          best = vals[j];
          best_e = e0 + offsets[j];
        }
      }
    }
  }
  // The grid may stop short of e_gen.
  if (ru.k * std::log1p(ru.e_gen) - price * ru.e_gen > best) best_e = ru.e_gen;
  best_e = std::clamp(best_e, ru.e_min, ru.e_gen);

  BestResponse r;
  r.e_star = best_e;
  r.offer = ru.e_gen - best_e;
  r.utility = ru_utility(ru, best_e, price);
  r.boundary = best_e == ru.e_min   ? Boundary::clamped_low
               : best_e == ru.e_gen ? Boundary::clamped_high
                                    : Boundary::interior;
  return r;
}

/// Evenly spaced (e_n, utility) samples on [e_min, e_gen]; both endpoints
/// are hit exactly.
inline std::vector<std::pair<double, double>> utility_curve(const RuParams& ru, double price,
                                                            std::size_t samples) {
  if (samples < 2) throw DomainError("a utility curve needs at least two samples");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(samples);
  const double span = ru.e_gen - ru.e_min;
  for (std::size_t i = 0; i < samples; ++i) {
    const double e = i + 1 == samples
                         ? ru.e_gen
                         : ru.e_min + span * static_cast<double>(i) /
                                          static_cast<double>(samples - 1);
    curve.emplace_back(e, ru_utility(ru, e, price));
  }
  return curve;
}

}  // namespace sfcgame

#pragma once

#include <vector>

#include "sfcgame/rng.hpp"
#include "sfcgame/types.hpp"

namespace sfcgame::testing {

/// Five identical RUs: k = 120, e_gen = 10, e_min = 0; e_req = 50,
/// grid 60 / 8.45.
inline Scenario uniform_five() {
  Scenario s;
  for (int i = 0; i < 5; ++i) s.rus.push_back({i, 120.0, 10.0, 0.0});
  s.e_req = 50.0;
  s.grid_sell = 60.0;
  s.grid_buy = 8.45;
  return s;
}

/// Interior equilibrium price for unclamped followers:
/// sqrt(grid_sell * sum k / sum (e_gen + 1)). Only valid when no RU is
/// clamped at that price.
inline double interior_price(const Scenario& s) {
  double k = 0.0, g = 0.0;
  for (const auto& ru : s.rus) {
    k += ru.k;
    g += ru.e_gen + 1.0;
  }
  return std::sqrt(s.grid_sell * k / g);
}

/// Random community in the usual tariff regime:
/// k in [90, 150], e_gen in [8, 12], e_min in [0, 1], e_req in [30, 100].
/// Every RU starts selling before any RU reaches its cost minimum, so the
/// induced cost is unimodal in the price.
inline Scenario random_community(Rng& rng, std::size_t min_n = 2, std::size_t max_n = 10) {
  Scenario s;
  const auto n = min_n + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(max_n - min_n + 1));
  for (std::size_t i = 0; i < n; ++i)
    s.rus.push_back({static_cast<int>(i), uniform(rng, 90.0, 150.0), uniform(rng, 8.0, 12.0),
                     uniform(rng, 0.0, 1.0)});
  s.e_req = uniform(rng, 30.0, 100.0);
  s.grid_sell = 60.0;
  s.grid_buy = 8.45;
  return s;
}

}  // namespace sfcgame::testing

#pragma once

// Side-effect-free evaluators: RU utility, facility cost, baseline and
// social cost. Utilities and costs share one scalar value unit.

#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "sfcgame/types.hpp"

namespace sfcgame {

/// U_n = k ln(1 + e_n) + price (e_gen - e_n).
inline double ru_utility(const RuParams& ru, double e_n, double price) {
  if (!(e_n >= ru.e_min && e_n <= ru.e_gen))
    throw DomainError("consumption " + std::to_string(e_n) + " of RU " +
                      std::to_string(ru.id) + " outside [e_min, e_gen]");
  if (!(price > 0.0)) throw DomainError("price must be positive");
  return ru.k * std::log1p(e_n) + price * (ru.e_gen - e_n);
}

/// Facility cost given only the aggregate offer. This is all the leader
/// ever sees; the grid term goes negative when total_offer > e_req.
inline double sfc_cost_from_total(double e_req, double grid_sell, double total_offer,
                                  double price) noexcept {
  return price * total_offer + (e_req - total_offer) * grid_sell;
}

/// Offers are summed in the order given.
inline double total_offer(std::span<const double> offers) noexcept {
  return std::accumulate(offers.begin(), offers.end(), 0.0);
}

inline double sfc_cost(const Scenario& s, std::span<const double> offers, double price) {
  if (offers.size() != s.rus.size())
    throw DomainError("offer list has " + std::to_string(offers.size()) + " entries for " +
                      std::to_string(s.rus.size()) + " RUs");
  for (std::size_t i = 0; i < offers.size(); ++i) {
    if (!(offers[i] >= 0.0 && offers[i] <= s.rus[i].max_offer()))
      throw DomainError("offer of RU " + std::to_string(s.rus[i].id) +
                        " outside [0, e_gen - e_min]");
  }
  return sfc_cost_from_total(s.e_req, s.grid_sell, total_offer(offers), price);
}

/// Everything bought from the grid at its selling price.
inline double baseline_cost(const Scenario& s) {
  validate_scenario(s);
  return s.e_req * s.grid_sell;
}

/// Facility cost minus the sum of RU utilities. Price transfers cancel, so
/// the result does not depend on `price`.
inline double social_cost(const Scenario& s, const Allocation& alloc, double price) {
  const auto offers = alloc.offers(s);
  double utilities = 0.0;
  for (std::size_t i = 0; i < s.rus.size(); ++i)
    utilities += ru_utility(s.rus[i], alloc.consumptions[i], price);
  return sfc_cost(s, offers, price) - utilities;
}

}  // namespace sfcgame

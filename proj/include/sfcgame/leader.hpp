#pragma once

// Leader side: the facility controller's price decision. sweep_price is the
// enumerating price search run by the controller; analytic_price minimizes
// the same cost over the continuum; centralized_optimum is the benchmark a
// controller with access to private RU data could reach.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sfcgame/follower.hpp"
#include "sfcgame/game_core.hpp"
#include "sfcgame/golden_section.hpp"

namespace sfcgame {

struct SweepConfig {
  double price_step = 0.5;
  std::optional<double> price_lo;  // defaults to grid_buy
  std::optional<double> price_hi;  // defaults to grid_sell
};

/// The finite list of prices a sweep visits: lo, lo+step, ..., never above hi.
class PriceGrid {
public:
  PriceGrid(double lo, double hi, double step) : lo_(lo), hi_(hi), step_(step) {
    count_ = lo == hi ? 1
                      : static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  }

  std::size_t size() const noexcept { return count_; }
  double operator[](std::size_t i) const noexcept {
    return std::min(lo_ + static_cast<double>(i) * step_, hi_);
  }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double step() const noexcept { return step_; }

private:
  double lo_, hi_, step_;
  std::size_t count_ = 0;
};

inline PriceGrid make_price_grid(double grid_buy, double grid_sell, const SweepConfig& cfg) {
  const double lo = cfg.price_lo.value_or(grid_buy);
  const double hi = cfg.price_hi.value_or(grid_sell);
  std::vector<Issue> issues;
  if (!(cfg.price_step > 0.0) || !std::isfinite(cfg.price_step))
    issues.push_back({"sweep.step", "price step must be positive"});
  if (!(lo >= grid_buy)) issues.push_back({"sweep.lo", "must not be below the grid buying price"});
  if (!(hi <= grid_sell)) issues.push_back({"sweep.hi", "must not exceed the grid selling price"});
  if (!(lo <= hi)) issues.push_back({"sweep.lo", "must not exceed sweep.hi"});
  else if (lo < hi && cfg.price_step > hi - lo)
    issues.push_back({"sweep.step", "price step wider than the price range"});
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return PriceGrid(lo, hi, cfg.price_step);
}

inline PriceGrid make_price_grid(const Scenario& s, const SweepConfig& cfg) {
  return make_price_grid(s.grid_buy, s.grid_sell, cfg);
}

struct TraceRecord {
  std::size_t iteration = 0;
  double price = 0.0;
  std::vector<double> offers;  // aligned with Scenario::rus
  double total_offer = 0.0;
  double cost = 0.0;
  double best_price = 0.0;
  double best_cost = 0.0;
};

struct SweepResult {
  double price = 0.0;
  double cost = 0.0;
  std::vector<TraceRecord> trace;
};

/// Followers' offers at one announced price, in scenario order.
inline std::vector<double> collect_offers(const Scenario& s, double price) {
  std::vector<double> offers(s.rus.size());
  std::transform(s.rus.begin(), s.rus.end(), offers.begin(),
                 [price](const RuParams& ru) { return best_response(ru, price).offer; });
  return offers;
}

/// Runs the price sweep and hands every iteration to `visit`. The incumbent
/// starts at (0, baseline cost) and is replaced whenever J <= J*, so among
/// equal-cost prices the highest one wins.
template <typename Visitor>
SweepResult sweep_price_visit(const Scenario& s, const SweepConfig& cfg, Visitor&& visit) {
  validate_scenario(s);
  const PriceGrid grid = make_price_grid(s, cfg);
  SweepResult best{0.0, s.e_req * s.grid_sell, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    TraceRecord rec;
    rec.iteration = i;
    rec.price = grid[i];
    rec.offers = collect_offers(s, rec.price);
    rec.total_offer = total_offer(rec.offers);
    rec.cost = sfc_cost(s, rec.offers, rec.price);
    if (rec.cost <= best.cost) {
      best.price = rec.price;
      best.cost = rec.cost;
    }
    rec.best_price = best.price;
    rec.best_cost = best.cost;
    visit(std::move(rec));
  }
  return best;
}

inline SweepResult sweep_price(const Scenario& s, const SweepConfig& cfg = {}) {
  std::vector<TraceRecord> trace;
  SweepResult r = sweep_price_visit(s, cfg, [&](TraceRecord&& rec) { trace.push_back(std::move(rec)); });
  r.trace = std::move(trace);
  return r;
}

/// Facility cost at `price` with every follower playing its best response.
inline double induced_cost(const Scenario& s, double price) {
  return sfc_cost(s, collect_offers(s, price), price);
}

struct PricePoint {
  double price = 0.0;
  double cost = 0.0;
};

/// Minimizes the induced cost over [grid_buy, grid_sell].
///
/// Between consecutive breakpoints k/(e_gen+1) and k/(1+e_min), where an RU
/// starts or stops being clamped, every RU term is convex in the price, so
/// golden-section search runs per segment and the best segment wins. The
/// incumbent starts at grid_buy and is only replaced on strict improvement,
/// so a flat cost returns grid_buy.
inline PricePoint analytic_price(const Scenario& s, double tol = 1e-6) {
  validate_scenario(s);
  const double lo = s.grid_buy;
  const double hi = s.grid_sell;

  std::vector<double> cuts{lo, hi};
  for (const auto& ru : s.rus) {
    for (double b : {ru.k / (ru.e_gen + 1.0), ru.k / (1.0 + ru.e_min)})
      if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto cost = [&s](double p) { return induced_cost(s, p); };
  PricePoint best{lo, cost(lo)};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto m = golden_section_minimize(cost, cuts[i], cuts[i + 1], tol);
    if (m.value < best.cost) best = {m.x, m.value};
  }
  return best;
}

struct CentralizedOptimum {
  Allocation allocation;
  double social_cost = 0.0;
};

/// Minimizes social cost over allocations. Transfers cancel, leaving
/// grid_sell (e_req - sum offers) - sum k ln(1+e_n), which separates per RU
/// into e_n = clamp(k/grid_sell - 1, e_min, e_gen).
inline CentralizedOptimum centralized_optimum(const Scenario& s) {
  validate_scenario(s);
  CentralizedOptimum out;
  out.allocation.consumptions.reserve(s.rus.size());
  for (const auto& ru : s.rus)
    out.allocation.consumptions.push_back(std::clamp(ru.k / s.grid_sell - 1.0, ru.e_min, ru.e_gen));
  out.social_cost = social_cost(s, out.allocation, s.grid_sell);
  return out;
}

}  // namespace sfcgame

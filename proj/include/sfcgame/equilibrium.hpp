#pragma once

// Equilibrium assembly, deviation-based verification of the equilibrium
// inequalities, and the proposed / baseline / centralized comparisons.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfcgame/leader.hpp"
#include "sfcgame/rng.hpp"

namespace sfcgame {

struct EquilibriumOutcome {
  double price = 0.0;
  Allocation allocation;
  std::vector<double> offers;
  double sfc_cost = 0.0;
  std::vector<double> utilities;
  double social_cost = 0.0;
  bool surplus = false;  // sum of offers exceeds e_req; grid term is negative

  friend bool operator==(const EquilibriumOutcome&, const EquilibriumOutcome&) = default;
};

/// Packages the followers' best responses to `price` as an outcome.
inline EquilibriumOutcome outcome_at(const Scenario& s, double price) {
  EquilibriumOutcome out;
  out.price = price;
  out.allocation.consumptions.reserve(s.rus.size());
  out.offers.reserve(s.rus.size());
  out.utilities.reserve(s.rus.size());
  for (const auto& ru : s.rus) {
    const auto br = best_response(ru, price);
    out.allocation.consumptions.push_back(br.e_star);
    out.offers.push_back(br.offer);
    out.utilities.push_back(br.utility);
  }
  out.sfc_cost = sfc_cost(s, out.offers, price);
  double total_utility = 0.0;
  for (double u : out.utilities) total_utility += u;
  out.social_cost = out.sfc_cost - total_utility;
  out.surplus = total_offer(out.offers) > s.e_req;
  return out;
}

/// Runs the price sweep and re-derives the followers' responses at the
/// winning price. Deterministic for fixed inputs.
inline EquilibriumOutcome compute_se(const Scenario& s, const SweepConfig& cfg = {}) {
  const SweepResult r = sweep_price_visit(s, cfg, [](TraceRecord&&) {});
  if (!(r.price > 0.0)) throw std::logic_error("price sweep never set an incumbent");
  return outcome_at(s, r.price);
}

struct SeVerification {
  std::size_t follower_violations = 0;
  double worst_follower_gain = -HUGE_VAL;  // max U(e') - U(e*) seen
  int worst_follower_id = -1;
  std::size_t leader_violations = 0;
  double worst_leader_gain = -HUGE_VAL;    // max J* - J(p) seen over the grid
  double worst_leader_price = 0.0;
  bool consistent = true;  // stored cost and utilities match a recomputation

  bool ok() const noexcept {
    return follower_violations == 0 && leader_violations == 0 && consistent;
  }
};

/// Checks that no RU gains by moving its consumption (`deviations` random
/// draws per RU) and that no swept price undercuts the outcome's cost.
/// A gain above `tol` counts as a violation.
inline SeVerification verify_se(const EquilibriumOutcome& outcome, const Scenario& s,
                                std::size_t deviations, const SweepConfig& cfg = {},
                                std::uint64_t seed = 0, double tol = 1e-9) {
  validate_scenario(s);
  const std::size_t n = s.rus.size();
  if (outcome.allocation.consumptions.size() != n || outcome.offers.size() != n ||
      outcome.utilities.size() != n)
    throw DomainError("outcome does not belong to this scenario: RU count differs");
  outcome.allocation.check_against(s);

  SeVerification rep;
  const double price = outcome.price;

  rep.consistent = sfc_cost(s, outcome.offers, price) == outcome.sfc_cost;
  for (std::size_t i = 0; i < n; ++i) {
    if (ru_utility(s.rus[i], outcome.allocation.consumptions[i], price) != outcome.utilities[i] ||
        s.rus[i].e_gen - outcome.allocation.consumptions[i] != outcome.offers[i])
      rep.consistent = false;
  }

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ru = s.rus[i];
    const double base = ru_utility(ru, outcome.allocation.consumptions[i], price);
    for (std::size_t d = 0; d < deviations; ++d) {
      const double e = std::min(uniform(rng, ru.e_min, ru.e_gen), ru.e_gen);
      const double gain = ru_utility(ru, e, price) - base;
      if (gain > rep.worst_follower_gain) {
        rep.worst_follower_gain = gain;
        rep.worst_follower_id = ru.id;
      }
      if (gain > tol) ++rep.follower_violations;
    }
  }

  const PriceGrid grid = make_price_grid(s, cfg);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double gain = outcome.sfc_cost - induced_cost(s, grid[i]);
    if (gain > rep.worst_leader_gain) {
      rep.worst_leader_gain = gain;
      rep.worst_leader_price = grid[i];
    }
    if (gain > tol) ++rep.leader_violations;
  }
  return rep;
}

struct AxisPoint {
  double axis_value = 0.0;
  Scenario scenario;
};

struct ComparisonRow {
  double axis_value = 0.0;
  std::size_t n_rus = 0;
  double e_req = 0.0;
  double se_price = 0.0;
  double proposed_cost = 0.0;
  double baseline_cost = 0.0;
  double reduction_fraction = 0.0;  // 1 - proposed / baseline
  double se_social_cost = 0.0;
  double centralized_social_cost = 0.0;
  double absolute_gap = 0.0;  // se - centralized
  double relative_gap = 0.0;  // (se - centralized) / |centralized|
  bool surplus = false;
};

struct ComparisonReport {
  std::string axis;  // "e_req" or "n_rus"
  std::vector<ComparisonRow> rows;

  double mean_reduction() const {
    double sum = 0.0;
    for (const auto& r : rows) sum += r.reduction_fraction;
    return rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
  }
  double mean_relative_gap() const {
    double sum = 0.0;
    for (const auto& r : rows) sum += r.relative_gap;
    return rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
  }
};

inline ComparisonRow compare_at(const AxisPoint& point, const SweepConfig& cfg) {
  const Scenario& s = point.scenario;
  const auto se = compute_se(s, cfg);
  const auto central = centralized_optimum(s);
  ComparisonRow row;
  row.axis_value = point.axis_value;
  row.n_rus = s.rus.size();
  row.e_req = s.e_req;
  row.se_price = se.price;
  row.proposed_cost = se.sfc_cost;
  row.baseline_cost = baseline_cost(s);
  row.reduction_fraction = 1.0 - row.proposed_cost / row.baseline_cost;
  row.se_social_cost = se.social_cost;
  row.centralized_social_cost = central.social_cost;
  row.absolute_gap = se.social_cost - central.social_cost;
  row.relative_gap = central.social_cost == 0.0
                         ? 0.0
                         : row.absolute_gap / std::abs(central.social_cost);
  row.surplus = se.surplus;
  return row;
}

/// One row per axis point, in the order given.
inline ComparisonReport compare_schemes(std::string axis, std::span<const AxisPoint> points,
                                        const SweepConfig& cfg = {}) {
  if (points.empty()) throw DomainError("comparison axis has no points");
  ComparisonReport rep{std::move(axis), {}};
  rep.rows.reserve(points.size());
  for (const auto& p : points) rep.rows.push_back(compare_at(p, cfg));
  return rep;
}

/// The base scenario at each required-energy value.
inline std::vector<AxisPoint> demand_axis(const Scenario& base, std::span<const double> e_reqs) {
  std::vector<AxisPoint> out;
  for (double e : e_reqs) {
    Scenario s = base;
    s.e_req = e;
    out.push_back({e, std::move(s)});
  }
  return out;
}

/// One scenario per RU count, built by `make` (typically a seeded generator).
inline std::vector<AxisPoint> ru_count_axis(const std::function<Scenario(std::size_t)>& make,
                                            std::span<const std::size_t> counts) {
  std::vector<AxisPoint> out;
  for (std::size_t n : counts) out.push_back({static_cast<double>(n), make(n)});
  return out;
}

}  // namespace sfcgame

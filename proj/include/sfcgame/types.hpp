#pragma once

// Domain types for the shared-facility energy market: residential units
// (followers), grid tariffs, full game instances and allocations.

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfcgame {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A precondition on an evaluator argument does not hold.
struct DomainError : Error {
  using Error::Error;
};

struct Issue {
  std::string path;     // e.g. "rus[2].k"
  std::string message;  // e.g. "k must be positive"
};

class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Issue> issues)
      : Error(render(issues)), issues_(std::move(issues)) {}
  explicit ValidationError(Issue issue) : ValidationError(std::vector<Issue>{std::move(issue)}) {}

  const std::vector<Issue>& issues() const noexcept { return issues_; }

private:
  static std::string render(const std::vector<Issue>& issues) {
    std::ostringstream os;
    os << "invalid scenario:";
    for (const auto& i : issues) os << "\n  " << i.path << ": " << i.message;
    return os.str();
  }

  std::vector<Issue> issues_;
};

/// One follower's private data. Never leaves the follower in the
/// distributed protocol.
struct RuParams {
  int id = 0;
  double k = 0.0;      // preference weight
  double e_gen = 0.0;  // generation, kWh
  double e_min = 0.0;  // base load, kWh

  double max_offer() const noexcept { return e_gen - e_min; }

  friend bool operator==(const RuParams&, const RuParams&) = default;
};

inline void check_ru(const RuParams& ru, const std::string& path,
                     std::vector<Issue>& out) {
  if (!std::isfinite(ru.k) || !(ru.k > 0.0))
    out.push_back({path + ".k", "k must be positive"});
  if (!std::isfinite(ru.e_min) || ru.e_min < 0.0)
    out.push_back({path + ".e_min", "base load must be non-negative"});
  if (!std::isfinite(ru.e_gen) || !(ru.e_gen > ru.e_min))
    out.push_back({path + ".e_gen", "generation must exceed base load"});
}

/// Grid tariffs plus the price the facility controller offers to RUs.
struct MarketPrices {
  double grid_sell = 0.0;  // grid sells to the SFC at this price
  double grid_buy = 0.0;   // grid buys from RUs at this price
  double sfc_price = 0.0;

  std::vector<Issue> check() const {
    std::vector<Issue> out;
    if (!(grid_buy > 0.0) || !(grid_buy < grid_sell) || !std::isfinite(grid_sell))
      out.push_back({"grid", "prices must satisfy 0 < buy < sell"});
    if (!(grid_buy <= sfc_price && sfc_price <= grid_sell))
      out.push_back({"sfc_price", "offered price must lie in [grid buy, grid sell]"});
    return out;
  }
};

struct Scenario {
  std::vector<RuParams> rus;
  double e_req = 0.0;  // energy the shared facility must procure, kWh
  double grid_sell = 0.0;
  double grid_buy = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return rus.size(); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Lists every violated invariant, with a field path. Empty means valid.
inline std::vector<Issue> check_scenario(const Scenario& s) {
  std::vector<Issue> out;
  if (!std::isfinite(s.e_req) || !(s.e_req > 0.0))
    out.push_back({"sfc.e_req", "required energy must be positive"});
  if (!std::isfinite(s.grid_buy) || !(s.grid_buy > 0.0))
    out.push_back({"grid.buy", "grid buying price must be positive"});
  if (!std::isfinite(s.grid_sell) || !(s.grid_sell > s.grid_buy))
    out.push_back({"grid.sell", "grid selling price must exceed the buying price"});
  if (s.rus.empty()) out.push_back({"rus", "at least one residential unit is required"});
  std::set<int> ids;
  for (std::size_t i = 0; i < s.rus.size(); ++i) {
    const std::string path = "rus[" + std::to_string(i) + "]";
    check_ru(s.rus[i], path, out);
    if (!ids.insert(s.rus[i].id).second)
      out.push_back({path + ".id", "duplicate id " + std::to_string(s.rus[i].id)});
  }
  return out;
}

/// Returns the scenario unchanged, or throws ValidationError listing every
/// violated invariant.
inline const Scenario& validate_scenario(const Scenario& s) {
  if (auto issues = check_scenario(s); !issues.empty())
    throw ValidationError(std::move(issues));
  return s;
}

/// Consumption vector e, aligned with Scenario::rus.
struct Allocation {
  std::vector<double> consumptions;

  /// Energy each RU sells to the facility, e_gen - e_n.
  std::vector<double> offers(const Scenario& s) const {
    check_against(s);
    std::vector<double> out(consumptions.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.rus[i].e_gen - consumptions[i];
    return out;
  }

  void check_against(const Scenario& s) const {
    if (consumptions.size() != s.rus.size())
      throw DomainError("allocation has " + std::to_string(consumptions.size()) +
                        " entries for " + std::to_string(s.rus.size()) + " RUs");
    for (std::size_t i = 0; i < consumptions.size(); ++i) {
      const auto& ru = s.rus[i];
      if (!(consumptions[i] >= ru.e_min && consumptions[i] <= ru.e_gen))
        throw DomainError("consumption of RU " + std::to_string(ru.id) +
                          " outside [e_min, e_gen]");
    }
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

}  // namespace sfcgame

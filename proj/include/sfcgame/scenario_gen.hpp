#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfcgame/rng.hpp"
#include "sfcgame/types.hpp"

namespace sfcgame {

/// Seeded population of identical-generation RUs with uniformly drawn
/// preference weights.
struct GenerateSpec {
  std::size_t count = 5;
  double k_lo = 90.0;
  double k_hi = 150.0;
  double e_gen = 10.0;
  double e_min = 0.0;
  std::uint64_t seed = 42;

  friend bool operator==(const GenerateSpec&, const GenerateSpec&) = default;
};

inline std::vector<Issue> check_generate(const GenerateSpec& g) {
  std::vector<Issue> out;
  if (g.count < 1) out.push_back({"generate.count", "must be at least 1"});
  if (!(g.k_lo > 0.0)) out.push_back({"generate.k_lo", "k must be positive"});
  if (!(g.k_lo <= g.k_hi) || !std::isfinite(g.k_hi))
    out.push_back({"generate.k_hi", "must not be below k_lo"});
  check_ru(RuParams{0, g.k_lo > 0.0 ? g.k_lo : 1.0, g.e_gen, g.e_min}, "generate", out);
  return out;
}

/// k_n ~ U[k_lo, k_hi) i.i.d. from mt19937_64(seed); ids are 0..count-1.
inline std::vector<RuParams> generate_rus(const GenerateSpec& g) {
  if (auto issues = check_generate(g); !issues.empty()) throw ValidationError(std::move(issues));
  Rng rng(g.seed);
  std::vector<RuParams> rus;
  rus.reserve(g.count);
  for (std::size_t i = 0; i < g.count; ++i)
    rus.push_back({static_cast<int>(i), uniform(rng, g.k_lo, g.k_hi), g.e_gen, g.e_min});
  return rus;
}

inline Scenario generate_scenario(const GenerateSpec& g, double e_req, double grid_sell,
                                  double grid_buy) {
  Scenario s{generate_rus(g), e_req, grid_sell, grid_buy, g.seed};
  return validate_scenario(s);
}

/// Five-RU community with e_gen = 10 kWh, e_req = 50 kWh, grid prices
/// 60 / 8.45 cents/kWh and k drawn from [90, 150].
inline Scenario default_scenario(std::uint64_t seed = 42) {
  GenerateSpec g;
  g.seed = seed;
  return generate_scenario(g, 50.0, 60.0, 8.45);
}

}  // namespace sfcgame

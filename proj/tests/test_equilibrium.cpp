#include <gtest/gtest.h>

#include "sfcgame/equilibrium.hpp"
#include "sfcgame/scenario_gen.hpp"
#include "test_support.hpp"

namespace sfcgame {
namespace {

using testing::uniform_five;

TEST(ComputeSe, UniformCommunity) {
  const auto s = uniform_five();
  const auto o = compute_se(s);
  EXPECT_DOUBLE_EQ(o.price, 25.45);
  EXPECT_NEAR(o.sfc_cost, 1914.2883104125738, 1e-9);
  EXPECT_FALSE(o.surplus);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(o.allocation.consumptions[i], 120.0 / 25.45 - 1.0);
    EXPECT_EQ(o.offers[i], 10.0 - o.allocation.consumptions[i]);
  }
  EXPECT_LT(o.sfc_cost, baseline_cost(s));
}

TEST(ComputeSe, Deterministic) {
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto s = testing::random_community(rng);
    EXPECT_EQ(compute_se(s), compute_se(s));
  }
}

TEST(ComputeSe, NobodySellsBelowTheirValuation) {
  // k tiny relative to every swept price: each RU sells all it generates
  // from the first price on, and the leader settles at the cheapest price.
  Scenario s = uniform_five();
  for (auto& ru : s.rus) ru.k = 1.0;
  const auto o = compute_se(s);
  EXPECT_DOUBLE_EQ(o.price, 8.45);
  for (double off : o.offers) EXPECT_EQ(off, 10.0);
}

TEST(ComputeSe, NoOffersAtAnyPriceLeavesBaselineCost) {
  Scenario s = uniform_five();
  for (auto& ru : s.rus) ru.k = 1e6;
  const auto o = compute_se(s);
  EXPECT_EQ(o.sfc_cost, baseline_cost(s));
  for (double off : o.offers) EXPECT_EQ(off, 0.0);
}

TEST(ComputeSe, SurplusFlagged) {
  Scenario s = uniform_five();
  s.e_req = 10.0;
  const auto o = compute_se(s);
  EXPECT_TRUE(o.surplus);
  EXPECT_GT(total_offer(o.offers), s.e_req);
}

TEST(ComputeSe, InternallyConsistent) {
  Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    const auto s = testing::random_community(rng);
    const auto o = compute_se(s);
    EXPECT_EQ(o.sfc_cost, sfc_cost(s, o.offers, o.price));
    double u = 0.0;
    for (std::size_t j = 0; j < s.rus.size(); ++j) {
      EXPECT_EQ(o.utilities[j], ru_utility(s.rus[j], o.allocation.consumptions[j], o.price));
      u += o.utilities[j];
    }
    EXPECT_EQ(o.social_cost, o.sfc_cost - u);
  }
}

TEST(ComputeSe, NeverWorseThanBaseline) {
  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    const auto s = testing::random_community(rng);
    EXPECT_LE(compute_se(s).sfc_cost, baseline_cost(s));
  }
}

TEST(ComputeSe, UniqueAcrossSweepOrigins) {
  // Shifting the grid origin by a fraction of a step lands on the same
  // basin: the prices found differ by less than a step.
  Rng rng(34);
  for (int i = 0; i < 10; ++i) {
    const auto s = testing::random_community(rng);
    const auto a = compute_se(s, SweepConfig{0.01, {}, {}});
    const auto b = compute_se(s, SweepConfig{0.01, s.grid_buy + 0.005, {}});
    EXPECT_NEAR(a.price, b.price, 0.01 + 1e-9);
    EXPECT_NEAR(a.price, analytic_price(s).price, 0.01);
  }
}

TEST(VerifySe, ComputedEquilibriumHasNoViolations) {
  Rng rng(35);
  for (int i = 0; i < 10; ++i) {
    const auto s = testing::random_community(rng);
    const auto o = compute_se(s);
    const auto v = verify_se(o, s, 500, {}, static_cast<std::uint64_t>(i));
    EXPECT_TRUE(v.ok());
    EXPECT_EQ(v.follower_violations, 0u);
    EXPECT_EQ(v.leader_violations, 0u);
    EXPECT_LE(v.worst_follower_gain, 1e-9);
  }
}

TEST(VerifySe, PerturbedConsumptionFlagsThatRu) {
  const auto s = uniform_five();
  auto o = outcome_at(s, 20.0);
  ASSERT_DOUBLE_EQ(o.allocation.consumptions[2], 5.0);
  o.allocation.consumptions[2] = 6.0;
  o.offers[2] = 4.0;
  o.utilities[2] = ru_utility(s.rus[2], 6.0, 20.0);
  o.sfc_cost = sfc_cost(s, o.offers, 20.0);
  const auto v = verify_se(o, s, 1000, SweepConfig{0.5, 20.0, 20.0});
  EXPECT_TRUE(v.consistent);
  EXPECT_GT(v.follower_violations, 0u);
  EXPECT_EQ(v.worst_follower_id, 2);
  EXPECT_GT(v.worst_follower_gain, 0.0);
}

TEST(VerifySe, LeaderAtGridBuyingPriceIsNotOptimal) {
  const auto s = uniform_five();
  const auto o = outcome_at(s, s.grid_buy);
  const auto v = verify_se(o, s, 100);
  EXPECT_EQ(v.follower_violations, 0u);
  EXPECT_GT(v.leader_violations, 0u);
  EXPECT_GT(v.worst_leader_gain, 1000.0);
  EXPECT_FALSE(v.ok());
}

TEST(VerifySe, InconsistentOutcomeDetected) {
  const auto s = uniform_five();
  auto o = compute_se(s);
  o.sfc_cost -= 1.0;
  EXPECT_FALSE(verify_se(o, s, 10).consistent);
}

TEST(VerifySe, RejectsOutcomeOfAnotherScenario) {
  const auto s = uniform_five();
  auto other = s;
  other.rus.pop_back();
  const auto o = compute_se(other);
  EXPECT_THROW(verify_se(o, s, 10), DomainError);
}

TEST(CompareSchemes, DemandAxis) {
  GenerateSpec g;
  g.count = 10;
  const Scenario base = generate_scenario(g, 60.0, 60.0, 8.45);
  const std::vector<double> e_reqs{60, 70, 80, 90, 100};
  const auto rep = compare_schemes("e_req", demand_axis(base, e_reqs));
  ASSERT_EQ(rep.rows.size(), 5u);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    EXPECT_EQ(r.e_req, e_reqs[i]);
    EXPECT_LT(r.proposed_cost, r.baseline_cost);
    EXPECT_GT(r.reduction_fraction, 0.0);
    if (i > 0) {
      EXPECT_GT(r.proposed_cost, rep.rows[i - 1].proposed_cost);
      EXPECT_GT(r.baseline_cost, rep.rows[i - 1].baseline_cost);
    }
  }
  EXPECT_GT(rep.mean_reduction(), 0.0);
}

TEST(CompareSchemes, RuCountAxis) {
  const std::vector<std::size_t> counts{5, 10, 15, 20, 25};
  const auto make = [](std::size_t n) {
    GenerateSpec g;
    g.count = n;
    return generate_scenario(g, 50.0, 60.0, 8.45);
  };
  const auto rep = compare_schemes("n_rus", ru_count_axis(make, counts));
  ASSERT_EQ(rep.rows.size(), 5u);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    EXPECT_EQ(r.n_rus, counts[i]);
    EXPECT_LE(r.centralized_social_cost, r.se_social_cost + 1e-9);
    EXPECT_GE(r.absolute_gap, -1e-9);
    EXPECT_DOUBLE_EQ(r.absolute_gap, r.se_social_cost - r.centralized_social_cost);
  }
}

TEST(CompareSchemes, SinglePoint) {
  const auto s = uniform_five();
  const std::vector<double> one{50.0};
  const auto rep = compare_schemes("e_req", demand_axis(s, one));
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_EQ(rep.mean_reduction(), rep.rows[0].reduction_fraction);
  EXPECT_NEAR(rep.rows[0].reduction_fraction, 1.0 - 1914.2883104125738 / 3000.0, 1e-12);
}

TEST(CompareSchemes, EmptyAxisThrows) {
  EXPECT_THROW(compare_schemes("e_req", std::span<const AxisPoint>{}), DomainError);
}

}  // namespace
}  // namespace sfcgame

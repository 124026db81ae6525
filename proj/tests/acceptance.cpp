// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "cli_session.hpp"
#include "process.hpp"
#include "sfcgame/equilibrium.hpp"
#include "sfcgame/io/csv.hpp"
#include "sfcgame/io/scenario_file.hpp"
#include "sfcgame/scenario_gen.hpp"
#include "test_support.hpp"

namespace {

using namespace sfcgame;
using clock_type = std::chrono::steady_clock;

const std::string kCli = SFCGAME_CLI;
const std::string kScenarios = SFCGAME_SCENARIOS;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Closed-form best response against an exhaustive grid search.
Verdict criterion1() {
  Rng rng(1001);
  std::vector<std::pair<RuParams, double>> cases;
  for (int i = 0; i < 1000; ++i) {
    const RuParams ru{i, uniform(rng, 1.0, 500.0), uniform(rng, 1.0, 20.0), 0.0};
    cases.emplace_back(ru, uniform(rng, 1.0, 100.0));
  }
  const auto t0 = clock_type::now();
  double worst = 0.0;
  for (const auto& [ru, p] : cases) {
    const double exact = best_response(ru, p).e_star;
    const double grid = best_response_oracle(ru, p, 1e-5).e_star;
    worst = std::max(worst, std::abs(exact - grid));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && secs < 5.0,
          "max |e_closed - e_grid| = " + fmt("%.3g", worst) + " kWh, " + fmt("%.2f", secs) + " s"};
}

// Sweep at step 1e-3 against the analytic optimum.
Verdict criterion2() {
  Rng rng(1002);
  std::vector<Scenario> ss;
  for (int i = 0; i < 100; ++i) ss.push_back(testing::random_community(rng));
  const auto t0 = clock_type::now();
  double worst_price = 0.0, worst_cost = 0.0;
  for (const auto& s : ss) {
    const auto sw = sweep_price_visit(s, SweepConfig{1e-3, {}, {}}, [](TraceRecord&&) {});
    const auto an = analytic_price(s);
    worst_price = std::max(worst_price, std::abs(sw.price - an.price));
    worst_cost = std::max(worst_cost, std::abs(sw.cost - an.cost) / std::abs(an.cost));
  }
  const double secs = seconds_since(t0);
  return {worst_price <= 1e-2 && worst_cost <= 1e-3 && secs < 30.0,
          "max price diff " + fmt("%.3g", worst_price) + ", max relative cost diff " +
              fmt("%.3g", worst_cost) + ", " + fmt("%.2f", secs) + " s"};
}

// Uniform five-RU community, fine sweep.
Verdict criterion3() {
  const auto s = testing::uniform_five();
  const auto se = compute_se(s, SweepConfig{1e-3, {}, {}});
  return {std::abs(se.price - 25.584) <= 0.01 && std::abs(se.sfc_cost - 1914.2) <= 0.5,
          "price " + fmt("%.6f", se.price) + ", cost " + fmt("%.6f", se.sfc_cost)};
}

// Step 0.5 trace: best cost non-increasing, settles at iteration 34 +- 2.
Verdict criterion4() {
  const auto r = sweep_price(testing::uniform_five(), SweepConfig{0.5, {}, {}});
  bool monotone = true;
  std::size_t settled = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    if (r.trace[i].best_cost > r.trace[i - 1].best_cost) monotone = false;
    if (r.trace[i].best_cost < r.trace[i - 1].best_cost) settled = i;
  }
  const bool near = settled >= 32 && settled <= 36;
  return {monotone && near, "best cost constant from iteration " + std::to_string(settled) +
                                " of " + std::to_string(r.trace.size()) +
                                (monotone ? ", non-increasing" : ", INCREASES somewhere")};
}

// Proposed vs grid-only cost over required energy.
Verdict criterion5() {
  GenerateSpec g;
  g.count = 10;
  g.seed = 42;
  const Scenario base = generate_scenario(g, 60.0, 60.0, 8.45);
  const std::vector<double> e_reqs{60, 70, 80, 90, 100};
  const auto rep = compare_schemes("e_req", demand_axis(base, e_reqs));
  bool dominance = true, growth = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    dominance = dominance && rep.rows[i].proposed_cost < rep.rows[i].baseline_cost;
    if (i > 0) growth = growth && rep.rows[i].proposed_cost > rep.rows[i - 1].proposed_cost;
  }
  return {dominance && growth,
          std::string(dominance ? "strict dominance" : "dominance FAILS") +
              (growth ? ", monotone growth" : ", growth NOT monotone") + "; mean reduction " +
              fmt("%.2f", 100.0 * rep.mean_reduction()) + "% (reference 74.9%)"};
}

// Equilibrium vs centralized social cost over RU count.
Verdict criterion6() {
  const auto f = io::default_scenario_file();
  const std::vector<std::size_t> counts{5, 10, 15, 20, 25};
  const auto rep = compare_schemes(
      "n_rus", ru_count_axis([&](std::size_t n) { return f.with_ru_count(n); }, counts));
  bool ordered = true;
  std::string gaps;
  for (const auto& r : rep.rows) {
    ordered = ordered && r.centralized_social_cost <= r.se_social_cost;
    gaps += " N=" + std::to_string(r.n_rus) + ":" + fmt("%.2f", 100.0 * r.relative_gap) + "%/" +
            fmt("%.1f", r.absolute_gap);
  }
  return {ordered, std::string(ordered ? "centralized <= SE at every N" : "ordering FAILS") +
                       "; mean relative gap " + fmt("%.2f", 100.0 * rep.mean_relative_gap()) +
                       "% (reference 7.07%); relative/absolute:" + gaps};
}

// Deviation check on random scenarios.
Verdict criterion7() {
  Rng rng(1007);
  std::size_t follower = 0, leader = 0, inconsistent = 0;
  double worst = -HUGE_VAL;
  for (int i = 0; i < 50; ++i) {
    const auto s = testing::random_community(rng);
    const auto se = compute_se(s);
    const auto v = verify_se(se, s, 1000, {}, static_cast<std::uint64_t>(i));
    follower += v.follower_violations;
    leader += v.leader_violations;
    inconsistent += v.consistent ? 0 : 1;
    worst = std::max(worst, v.worst_follower_gain);
  }
  return {follower == 0 && leader == 0 && inconsistent == 0,
          std::to_string(follower) + " follower / " + std::to_string(leader) +
              " leader violations, " + std::to_string(inconsistent) +
              " inconsistent; worst follower gain " + fmt("%.3g", worst)};
}

// Socket session with five agent processes, three jittered arrival orders.
Verdict criterion8() {
  const std::string path = kScenarios + "/community_default.json";
  const auto f = io::load_scenario(path);
  const auto sweep = sweep_price(f.scenario, f.sweep);
  std::ostringstream want;
  io::write_outcome_summary(want, f.scenario, outcome_at(f.scenario, sweep.price));

  bool all_equal = true;
  std::set<std::string> orders;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto d = testing::run_distributed(kCli, path, f.scenario.rus.size(), seed, 3);
    bool ok = d.serve_exit == 0 && d.summary == want.str();
    for (int e : d.agent_exits) ok = ok && e == 0;
    if (!ok) detail += " run " + std::to_string(seed) + " differs (serve exit " +
                       std::to_string(d.serve_exit) + ": " + d.serve_err + ")";
    all_equal = all_equal && ok;
    orders.insert(d.arrivals);
  }
  return {all_equal, std::string(all_equal ? "3/3 sessions identical to in-process sweep" : "MISMATCH") +
                         ", " + std::to_string(orders.size()) + " distinct arrival traces" + detail};
}

// Two runs of every subcommand, byte-compared.
Verdict criterion9() {
  const std::string sc = kScenarios + "/community_default.json";
  testing::TempDir dir;
  const std::vector<std::pair<std::string, std::vector<std::string>>> cmds{
      {"solve", {kCli, "solve", "--scenario", sc, "--seed", "7"}},
      {"verify", {kCli, "verify", "--scenario", sc, "--seed", "7", "--deviations", "500"}},
      {"fig2", {kCli, "fig2", "--scenario", sc, "--seed", "7"}},
      {"fig3", {kCli, "fig3", "--scenario", sc, "--seed", "7"}},
      {"fig4", {kCli, "fig4", "--scenario", sc, "--seed", "7"}},
      {"fig5", {kCli, "fig5", "--scenario", sc, "--seed", "7"}},
  };
  std::string bad;
  for (const auto& [name, cmd] : cmds) {
    const auto a = testing::run(cmd);
    const auto b = testing::run(cmd);
    if (a.exit_code != 0 || a.out.empty() || a.out != b.out || a.exit_code != b.exit_code)
      bad += " " + name;
  }
  // serve and agent: the leader's summary and every agent's report.
  const auto r1 = testing::run_distributed(kCli, sc, 5, 7, 0, false);
  const auto r2 = testing::run_distributed(kCli, sc, 5, 7, 0, false);
  if (r1.serve_exit != 0 || r1.summary.empty() || r1.summary != r2.summary) bad += " serve";
  if (r1.agent_outputs != r2.agent_outputs || r1.agent_outputs.empty() ||
      r1.agent_outputs[0].empty())
    bad += " agent";
  return {bad.empty(), bad.empty() ? "solve verify fig2 fig3 fig4 fig5 serve agent identical"
                                   : "differs:" + bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 best-response oracle equivalence", criterion1},
      {"2 leader oracle equivalence", criterion2},
      {"3 five-RU deterministic pin", criterion3},
      {"4 convergence shape", criterion4},
      {"5 baseline comparison", criterion5},
      {"6 centralized comparison", criterion6},
      {"7 equilibrium verification", criterion7},
      {"8 distributed fidelity", criterion8},
      {"9 CLI determinism", criterion9},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << v.detail
              << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}

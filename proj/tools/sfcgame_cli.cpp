// sfcgame: solve, verify and simulate the facility/RU energy market.
//
//   sfcgame solve  [--scenario f] [--trace out.csv]
//   sfcgame verify [--scenario f] [--deviations n]
//   sfcgame fig2   [--scenario f] [--ru i] [--prices a,b,c] [--samples n]
//   sfcgame fig3   [--scenario f]
//   sfcgame fig4   [--scenario f] [--e-req-range lo:hi:step]
//   sfcgame fig5   [--scenario f] [--n-range lo:hi:step]
//   sfcgame serve  [--scenario f] --address host:port [--port-file f]
//   sfcgame agent  --address host:port (--scenario f --ru i | --id n --k x --e-gen x [--e-min x])
//
// Common flags: --scenario, --seed, --step, --out. Without --scenario the
// built-in five-RU community is used.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sfcgame/equilibrium.hpp"
#include "sfcgame/io/csv.hpp"
#include "sfcgame/io/scenario_file.hpp"
#include "sfcgame/protocol/session.hpp"
#include "sfcgame/protocol/socket.hpp"

namespace {

using namespace sfcgame;
namespace proto = sfcgame::protocol;

constexpr int kExitError = 1;
constexpr int kExitViolation = 3;

struct Common {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  std::string out_path;
};

io::ScenarioFile load(const Common& c) {
  io::ScenarioFile f = c.scenario_path.empty() ? io::default_scenario_file()
                                               : io::load_scenario(c.scenario_path);
  if (c.seed && f.generate) {
    f.generate->seed = *c.seed;
    f.scenario = generate_scenario(*f.generate, f.scenario.e_req, f.scenario.grid_sell,
                                   f.scenario.grid_buy);
  }
  if (c.step) f.sweep.price_step = *c.step;
  make_price_grid(f.scenario, f.sweep);
  return f;
}

/// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const Common& c, Fn&& fn) {
  if (c.out_path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(c.out_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + c.out_path + "'");
  fn(out);
}

/// "lo:hi:step", inclusive of hi.
std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    auto v = parse_number(tok);
    if (!v) throw Error("bad range '" + text + "', expected lo:hi:step");
    parts.push_back(*v);
  }
  if (parts.size() == 1) parts = {parts[0], parts[0], 1.0};
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw Error("bad range '" + text + "', expected lo:hi:step with lo <= hi and step > 0");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto v = parse_number(tok);
    if (!v) throw Error("bad number '" + tok + "' in list");
    out.push_back(*v);
  }
  if (out.empty()) throw Error("empty list");
  return out;
}

int cmd_solve(const Common& c, const std::string& trace_path) {
  const auto f = load(c);
  const Scenario& s = f.scenario;
  const auto sweep = sweep_price(s, f.sweep);
  const auto se = outcome_at(s, sweep.price);
  emit(c, [&](std::ostream& os) {
    io::write_outcome_summary(os, s, se);
    for (std::size_t i = 0; i < s.rus.size(); ++i) {
      const auto br = best_response(s.rus[i], se.price);
      os << "consumption " << s.rus[i].id << ' ' << format_number(br.e_star) << ' '
         << to_string(br.boundary) << '\n';
    }
    for (std::size_t i = 0; i < s.rus.size(); ++i)
      os << "utility " << s.rus[i].id << ' ' << format_number(se.utilities[i]) << '\n';
    os << "social_cost " << format_number(se.social_cost) << '\n';
    os << "baseline_cost " << format_number(baseline_cost(s)) << '\n';
    os << "iterations " << sweep.trace.size() << '\n';
  });
  if (!trace_path.empty()) {
    std::ofstream t(trace_path, std::ios::binary);
    if (!t) throw Error("cannot write '" + trace_path + "'");
    io::write_trace_csv(t, s, sweep.trace);
  }
  return 0;
}

int cmd_verify(const Common& c, std::size_t deviations) {
  const auto f = load(c);
  const auto se = compute_se(f.scenario, f.sweep);
  const auto rep = verify_se(se, f.scenario, deviations, f.sweep, c.seed.value_or(0));
  emit(c, [&](std::ostream& os) {
    os << "price " << format_number(se.price) << '\n';
    os << "sfc_cost " << format_number(se.sfc_cost) << '\n';
    os << "follower_violations " << rep.follower_violations << '\n';
    os << "worst_follower_gain " << format_number(rep.worst_follower_gain) << '\n';
    os << "leader_violations " << rep.leader_violations << '\n';
    os << "worst_leader_gain " << format_number(rep.worst_leader_gain) << '\n';
    os << "consistent " << (rep.consistent ? "yes" : "no") << '\n';
    os << "result " << (rep.ok() ? "equilibrium" : "violated") << '\n';
  });
  return rep.ok() ? 0 : kExitViolation;
}

int cmd_fig2(const Common& c, std::size_t ru_index, const std::string& prices,
             std::size_t samples) {
  const auto f = load(c);
  if (ru_index >= f.scenario.rus.size())
    throw Error("--ru " + std::to_string(ru_index) + " out of range (scenario has " +
                std::to_string(f.scenario.rus.size()) + " RUs)");
  const auto& ru = f.scenario.rus[ru_index];
  std::vector<io::CurvePoint> pts;
  for (double p : parse_list(prices)) {
    if (!(p > 0.0)) throw Error("prices must be positive");
    for (const auto& [e, u] : utility_curve(ru, p, samples)) pts.push_back({p, e, u});
  }
  emit(c, [&](std::ostream& os) { io::write_fig2_csv(os, pts); });
  return 0;
}

int cmd_fig3(const Common& c) {
  const auto f = load(c);
  const auto r = sweep_price(f.scenario, f.sweep);
  emit(c, [&](std::ostream& os) { io::write_fig3_csv(os, r.trace); });
  return 0;
}

int cmd_fig4(const Common& c, const std::string& range) {
  const auto f = load(c);
  const auto reqs = parse_range(range);
  const auto points = demand_axis(f.scenario, reqs);
  const auto rep = compare_schemes("e_req", points, f.sweep);
  emit(c, [&](std::ostream& os) { io::write_fig4_csv(os, rep); });
  return 0;
}

int cmd_fig5(const Common& c, const std::string& range) {
  const auto f = load(c);
  std::vector<std::size_t> counts;
  for (double v : parse_range(range)) {
    if (v < 1.0 || v != std::floor(v)) throw Error("RU counts must be positive integers");
    counts.push_back(static_cast<std::size_t>(v));
  }
  const auto points =
      ru_count_axis([&](std::size_t n) { return f.with_ru_count(n); }, counts);
  const auto rep = compare_schemes("n_rus", points, f.sweep);
  emit(c, [&](std::ostream& os) { io::write_fig5_csv(os, rep); });
  return 0;
}

struct ServeOptions {
  std::string address;
  std::string port_file;
  std::string arrivals_path;
  int round_timeout_ms = 5000;
  int accept_timeout_ms = 30000;
};

int cmd_serve(const Common& c, const ServeOptions& o) {
  const auto f = load(c);
  const auto view = proto::leader_view(f.scenario, f.sweep);
  proto::SocketLeaderTransport transport(proto::parse_address(o.address));
  if (!o.port_file.empty()) {
    const std::string tmp = o.port_file + ".tmp";
    {
      std::ofstream pf(tmp);
      pf << transport.port() << '\n';
    }
    std::rename(tmp.c_str(), o.port_file.c_str());
  }
  std::cerr << "listening on port " << transport.port() << std::endl;
  transport.accept_peers(view.expected_rus, std::chrono::milliseconds(o.accept_timeout_ms));

  proto::LeaderOptions lo;
  lo.round_timeout = std::chrono::milliseconds(o.round_timeout_ms);
  const auto out = proto::run_leader(view, transport, lo);
  emit(c, [&](std::ostream& os) {
    io::write_outcome_summary(os, out.price, out.cost, out.surplus, out.offers);
  });
  if (!o.arrivals_path.empty()) {
    std::ofstream a(o.arrivals_path, std::ios::binary);
    a << "round,arrival_order\n";
    for (const auto& r : out.rounds) {
      a << r.round << ',';
      for (std::size_t i = 0; i < r.arrival_order.size(); ++i)
        a << (i ? " " : "") << r.arrival_order[i];
      a << '\n';
    }
  }
  return 0;
}

struct AgentOptions {
  std::string address;
  std::optional<std::size_t> ru_index;
  std::optional<int> id;
  std::optional<double> k, e_gen;
  double e_min = 0.0;
  int jitter_ms = 0;
  std::uint64_t jitter_seed = 0;
  int connect_timeout_ms = 2000;
  int idle_timeout_ms = 30000;
};

int cmd_agent(const Common& c, const AgentOptions& o) {
  RuParams ru;
  if (o.ru_index) {
    const auto f = load(c);
    if (*o.ru_index >= f.scenario.rus.size()) throw Error("--ru out of range");
    ru = f.scenario.rus[*o.ru_index];
  } else {
    if (!o.id || !o.k || !o.e_gen) throw Error("agent needs --ru with a scenario, or --id --k --e-gen");
    ru = {*o.id, *o.k, *o.e_gen, o.e_min};
  }
  std::vector<Issue> issues;
  check_ru(ru, "ru", issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));

  proto::SocketFollowerTransport transport(proto::parse_address(o.address), ru.id,
                                           std::chrono::milliseconds(o.connect_timeout_ms));
  proto::FollowerOptions fo;
  fo.idle_timeout = std::chrono::milliseconds(o.idle_timeout_ms);
  Rng jitter(o.jitter_seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(ru.id + 1)));
  if (o.jitter_ms > 0) {
    fo.before_reply = [&] {
      std::this_thread::sleep_for(std::chrono::microseconds(
          static_cast<long>(uniform01(jitter) * 1000.0 * o.jitter_ms)));
    };
  }
  const auto log = proto::run_follower(ru, transport, fo);
  if (log.aborted) {
    std::cerr << "session aborted by leader: " << *log.aborted << '\n';
    return kExitError;
  }
  emit(c, [&](std::ostream& os) {
    os << "ru " << ru.id << " rounds " << log.rounds.size() << " price "
       << format_number(log.result->price) << '\n';
  });
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--scenario", c.scenario_path, "Scenario JSON file");
  sub->add_option("--seed", c.seed, "Override the generator seed");
  sub->add_option("--step", c.step, "Override the price step (cents/kWh)");
  sub->add_option("--out", c.out_path, "Output path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader/follower energy market between a shared facility and residential units"};
  app.require_subcommand(1);

  Common common;
  std::string trace_path;
  std::size_t deviations = 1000;
  std::size_t ru_index = 0;
  std::string prices = "10,20,30,40,50,60";
  std::size_t samples = 101;
  std::string e_req_range = "60:100:10";
  std::string n_range = "5:25:5";
  ServeOptions serve;
  AgentOptions agent;

  auto* solve = app.add_subcommand("solve", "Compute the equilibrium");
  add_common(solve, common);
  solve->add_option("--trace", trace_path, "Write the price-sweep trace CSV");

  auto* verify = app.add_subcommand("verify", "Compute the equilibrium and check for profitable deviations");
  add_common(verify, common);
  verify->add_option("--deviations", deviations, "Random deviations per RU");

  auto* fig2 = app.add_subcommand("fig2", "Utility curves of one RU at several prices");
  add_common(fig2, common);
  fig2->add_option("--ru", ru_index, "RU index in the scenario");
  fig2->add_option("--prices", prices, "Comma-separated prices");
  fig2->add_option("--samples", samples, "Samples per curve")->check(CLI::Range(2, 1000000));

  auto* fig3 = app.add_subcommand("fig3", "Facility cost across sweep iterations");
  add_common(fig3, common);

  auto* fig4 = app.add_subcommand("fig4", "Proposed vs baseline cost over required energy");
  add_common(fig4, common);
  fig4->add_option("--e-req-range", e_req_range, "lo:hi:step");

  auto* fig5 = app.add_subcommand("fig5", "Equilibrium vs centralized social cost over RU count");
  add_common(fig5, common);
  fig5->add_option("--n-range", n_range, "lo:hi:step");

  auto* srv = app.add_subcommand("serve", "Run the facility controller over TCP");
  add_common(srv, common);
  srv->add_option("--address", serve.address, "host:port to listen on (port 0: ephemeral)")->required();
  srv->add_option("--port-file", serve.port_file, "Write the bound port here once listening");
  srv->add_option("--arrivals", serve.arrivals_path, "Write per-round offer arrival order CSV");
  srv->add_option("--round-timeout-ms", serve.round_timeout_ms, "Per-round offer timeout");
  srv->add_option("--accept-timeout-ms", serve.accept_timeout_ms, "Time allowed for all RUs to connect");

  auto* agt = app.add_subcommand("agent", "Run one residential unit over TCP");
  add_common(agt, common);
  agt->add_option("--address", agent.address, "Leader host:port")->required();
  agt->add_option("--ru", agent.ru_index, "RU index in --scenario");
  agt->add_option("--id", agent.id, "RU id");
  agt->add_option("--k", agent.k, "Preference weight");
  agt->add_option("--e-gen", agent.e_gen, "Generation (kWh)");
  agt->add_option("--e-min", agent.e_min, "Base load (kWh)");
  agt->add_option("--jitter-ms", agent.jitter_ms, "Random delay before each offer, up to this many ms");
  agt->add_option("--jitter-seed", agent.jitter_seed, "Seed for the jitter delays");
  agt->add_option("--connect-timeout-ms", agent.connect_timeout_ms, "Give up connecting after this long");
  agt->add_option("--idle-timeout-ms", agent.idle_timeout_ms, "Give up when the leader is silent this long");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(common, trace_path);
    if (*verify) return cmd_verify(common, deviations);
    if (*fig2) return cmd_fig2(common, ru_index, prices, samples);
    if (*fig3) return cmd_fig3(common);
    if (*fig4) return cmd_fig4(common, e_req_range);
    if (*fig5) return cmd_fig5(common, n_range);
    if (*srv) return cmd_serve(common, serve);
    if (*agt) return cmd_agent(common, agent);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

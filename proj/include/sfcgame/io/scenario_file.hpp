#pragma once

// JSON scenario files:
//
//   {
//     "grid": {"sell": 60, "buy": 8.45},
//     "sfc":  {"e_req": 50},
//     "rus":  [{"id": 0, "k": 120, "e_gen": 10, "e_min": 0}, ...],
//     "generate": {"count": 5, "k_lo": 90, "k_hi": 150, "e_gen": 10, "e_min": 0, "seed": 42},
//     "sweep": {"step": 0.5, "lo": 8.45, "hi": 60}
//   }
//
// Exactly one of "rus" / "generate". "id" defaults to the list index and
// "e_min" to 0; "sweep" and each of its fields are optional.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sfcgame/leader.hpp"
#include "sfcgame/scenario_gen.hpp"

namespace sfcgame::io {

struct ScenarioFile {
  Scenario scenario;
  std::optional<GenerateSpec> generate;  // set when the RUs were generated
  SweepConfig sweep;

  /// The same file with `count` generated RUs (or the first `count`
  /// explicit ones).
  Scenario with_ru_count(std::size_t count) const {
    if (generate) {
      GenerateSpec g = *generate;
      g.count = count;
      return generate_scenario(g, scenario.e_req, scenario.grid_sell, scenario.grid_buy);
    }
    if (count == 0 || count > scenario.rus.size())
      throw ValidationError(Issue{"rus", "file lists " + std::to_string(scenario.rus.size()) +
                                         " RUs, cannot take " + std::to_string(count)});
    Scenario s = scenario;
    s.rus.resize(count);
    return s;
  }
};

namespace detail {

using nlohmann::json;

class Reader {
public:
  std::vector<Issue> issues;

  const json* object(const json& parent, const std::string& key, const std::string& path,
                     bool required) {
    if (!parent.contains(key)) {
      if (required) issues.push_back({path, "missing section"});
      return nullptr;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
      issues.push_back({path, "must be an object"});
      return nullptr;
    }
    return &v;
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               bool required) {
    if (!obj.contains(key)) {
      if (required) issues.push_back({path, "missing field"});
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
      issues.push_back({path, "must be a number"});
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::uint64_t> unsigned_int(const json& obj, const std::string& key,
                                            const std::string& path, bool required) {
    if (!obj.contains(key)) {
      if (required) issues.push_back({path, "missing field"});
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
      issues.push_back({path, "must be a non-negative integer"});
      return std::nullopt;
    }
    return v.get<std::uint64_t>();
  }

  void only_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) issues.push_back({path.empty() ? key : path + "." + key, "unknown field"});
    }
  }
};

}  // namespace detail

/// Parses and validates; every problem is reported with its field path.
inline ScenarioFile parse_scenario(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(Issue{"<document>", std::string("not valid JSON: ") + e.what()});
  }
  if (!doc.is_object()) throw ValidationError(Issue{"<document>", "must be a JSON object"});

  detail::Reader rd;
  ScenarioFile out;
  rd.only_keys(doc, {"grid", "sfc", "rus", "generate", "sweep"}, "");

  if (const json* grid = rd.object(doc, "grid", "grid", true)) {
    rd.only_keys(*grid, {"sell", "buy"}, "grid");
    out.scenario.grid_sell = rd.number(*grid, "sell", "grid.sell", true).value_or(0.0);
    out.scenario.grid_buy = rd.number(*grid, "buy", "grid.buy", true).value_or(0.0);
  }
  if (const json* sfc = rd.object(doc, "sfc", "sfc", true)) {
    rd.only_keys(*sfc, {"e_req"}, "sfc");
    out.scenario.e_req = rd.number(*sfc, "e_req", "sfc.e_req", true).value_or(0.0);
  }

  const bool has_rus = doc.contains("rus");
  const bool has_gen = doc.contains("generate");
  if (has_rus == has_gen)
    rd.issues.push_back({"rus", "exactly one of 'rus' or 'generate' must be present"});

  if (has_rus) {
    const json& rus = doc.at("rus");
    if (!rus.is_array()) {
      rd.issues.push_back({"rus", "must be an array"});
    } else {
      for (std::size_t i = 0; i < rus.size(); ++i) {
        const std::string path = "rus[" + std::to_string(i) + "]";
        if (!rus[i].is_object()) {
          rd.issues.push_back({path, "must be an object"});
          continue;
        }
        rd.only_keys(rus[i], {"id", "k", "e_gen", "e_min"}, path);
        RuParams ru;
        ru.id = static_cast<int>(
            rd.unsigned_int(rus[i], "id", path + ".id", false).value_or(i));
        ru.k = rd.number(rus[i], "k", path + ".k", true).value_or(1.0);
        ru.e_gen = rd.number(rus[i], "e_gen", path + ".e_gen", true).value_or(1.0);
        ru.e_min = rd.number(rus[i], "e_min", path + ".e_min", false).value_or(0.0);
        out.scenario.rus.push_back(ru);
      }
    }
  }

  if (has_gen) {
    if (const json* gen = rd.object(doc, "generate", "generate", true)) {
      rd.only_keys(*gen, {"count", "k_lo", "k_hi", "e_gen", "e_min", "seed"}, "generate");
      GenerateSpec g;
      g.count = rd.unsigned_int(*gen, "count", "generate.count", true).value_or(1);
      g.k_lo = rd.number(*gen, "k_lo", "generate.k_lo", true).value_or(1.0);
      g.k_hi = rd.number(*gen, "k_hi", "generate.k_hi", true).value_or(g.k_lo);
      g.e_gen = rd.number(*gen, "e_gen", "generate.e_gen", true).value_or(1.0);
      g.e_min = rd.number(*gen, "e_min", "generate.e_min", false).value_or(0.0);
      g.seed = rd.unsigned_int(*gen, "seed", "generate.seed", false).value_or(42);
      auto gi = check_generate(g);
      rd.issues.insert(rd.issues.end(), gi.begin(), gi.end());
      if (gi.empty()) {
        out.generate = g;
        out.scenario.rus = generate_rus(g);
        out.scenario.seed = g.seed;
      }
    }
  }

  if (const json* sw = rd.object(doc, "sweep", "sweep", false)) {
    rd.only_keys(*sw, {"step", "lo", "hi"}, "sweep");
    if (auto v = rd.number(*sw, "step", "sweep.step", false)) out.sweep.price_step = *v;
    out.sweep.price_lo = rd.number(*sw, "lo", "sweep.lo", false);
    out.sweep.price_hi = rd.number(*sw, "hi", "sweep.hi", false);
  }

  if (!rd.issues.empty()) throw ValidationError(std::move(rd.issues));
  if (auto issues = check_scenario(out.scenario); !issues.empty())
    throw ValidationError(std::move(issues));
  make_price_grid(out.scenario, out.sweep);  // throws on a bad sweep section
  return out;
}

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

/// Five generated RUs, e_req 50 kWh, grid 60 / 8.45, step 0.5.
inline ScenarioFile default_scenario_file() {
  ScenarioFile f;
  f.generate = GenerateSpec{};
  f.scenario = default_scenario(f.generate->seed);
  return f;
}

}  // namespace sfcgame::io

#pragma once

// CSV and text renderings of experiment results. Comma separated, '.'
// decimal point, LF line endings, one header row. Numbers use
// format_number so output bytes are stable across runs and platforms.

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfcgame/equilibrium.hpp"
#include "sfcgame/number_format.hpp"

namespace sfcgame::io {

namespace detail {

inline void row(std::ostream& os, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

inline std::string num(double v) { return format_number(v); }

}  // namespace detail

/// iteration,price,total_offer,cost,best_price,best_cost,offer_<id>...
inline void write_trace_csv(std::ostream& os, const Scenario& s,
                            std::span<const TraceRecord> trace) {
  os << "iteration,price,total_offer,cost,best_price,best_cost";
  for (const auto& ru : s.rus) os << ",offer_" << ru.id;
  os << '\n';
  for (const auto& r : trace) {
    os << r.iteration << ',' << detail::num(r.price) << ',' << detail::num(r.total_offer) << ','
       << detail::num(r.cost) << ',' << detail::num(r.best_price) << ','
       << detail::num(r.best_cost);
    for (double o : r.offers) os << ',' << detail::num(o);
    os << '\n';
  }
}

struct CurvePoint {
  double price = 0.0;
  double e_n = 0.0;
  double utility = 0.0;
};

inline void write_fig2_csv(std::ostream& os, std::span<const CurvePoint> pts) {
  os << "price,e_n,utility\n";
  for (const auto& p : pts) detail::row(os, {detail::num(p.price), detail::num(p.e_n), detail::num(p.utility)});
}

inline void write_fig3_csv(std::ostream& os, std::span<const TraceRecord> trace) {
  os << "iteration,price,cost,best_cost\n";
  for (const auto& r : trace)
    detail::row(os, {std::to_string(r.iteration), detail::num(r.price), detail::num(r.cost),
                     detail::num(r.best_cost)});
}

inline void write_fig4_csv(std::ostream& os, const ComparisonReport& rep) {
  os << "e_req,proposed_cost,baseline_cost,reduction_fraction\n";
  for (const auto& r : rep.rows)
    detail::row(os, {detail::num(r.e_req), detail::num(r.proposed_cost),
                     detail::num(r.baseline_cost), detail::num(r.reduction_fraction)});
}

inline void write_fig5_csv(std::ostream& os, const ComparisonReport& rep) {
  os << "n_rus,se_social_cost,centralized_social_cost,relative_gap,absolute_gap\n";
  for (const auto& r : rep.rows)
    detail::row(os, {std::to_string(r.n_rus), detail::num(r.se_social_cost),
                     detail::num(r.centralized_social_cost), detail::num(r.relative_gap),
                     detail::num(r.absolute_gap)});
}

/// The fields both the in-process solver and the distributed leader know:
/// price, facility cost, surplus flag and each RU's offer, by id.
inline void write_outcome_summary(std::ostream& os, double price, double cost, bool surplus,
                                  const std::map<int, double>& offers) {
  os << "price " << format_number(price) << '\n';
  os << "sfc_cost " << format_number(cost) << '\n';
  os << "surplus " << (surplus ? "yes" : "no") << '\n';
  for (const auto& [id, v] : offers) os << "offer " << id << ' ' << format_number(v) << '\n';
}

inline std::map<int, double> offers_by_id(const Scenario& s, std::span<const double> offers) {
  std::map<int, double> out;
  for (std::size_t i = 0; i < s.rus.size(); ++i) out.emplace(s.rus[i].id, offers[i]);
  return out;
}

inline void write_outcome_summary(std::ostream& os, const Scenario& s,
                                  const EquilibriumOutcome& o) {
  write_outcome_summary(os, o.price, o.sfc_cost, o.surplus, offers_by_id(s, o.offers));
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with one header row. Throws on ragged rows or
/// non-numeric cells.
inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    for (;;) {
      const auto comma = l.find(',', pos);
      cells.push_back(l.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return cells;
  };
  if (!std::getline(in, line)) throw Error("empty CSV");
  t.header = split(line);
  while (std::getline(in, line)) {
    const auto cells = split(line);
    if (cells.size() != t.header.size()) throw Error("ragged CSV row: " + line);
    std::vector<double> r;
    for (const auto& c : cells) {
      auto v = parse_number(c);
      if (!v) throw Error("non-numeric CSV cell '" + c + "'");
      r.push_back(*v);
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace sfcgame::io

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "crafterlab/analytics/empowerment.hpp"
#include "crafterlab/analytics/information.hpp"
#include "crafterlab/analytics/scores.hpp"
#include "crafterlab/analytics/tables.hpp"

namespace crafterlab {

struct MetricReport {
  std::string session_id;
  std::string subject_kind;
  std::size_t n_episodes = 0;
  std::size_t n_steps = 0;
  std::size_t alphabet_size = 0;
  std::int64_t transitions = 0;
  std::vector<double> entropy_curve;
  std::vector<std::optional<double>> info_gain_curve;
  double overall_entropy = 0.0;
  std::optional<double> overall_info_gain;
  double total_empowerment = 0.0;
  bool empowerment_converged = true;
  ExplorationScores scores;
};

inline MetricReport metric_report(const Session& session, const WorldConfig& cfg) {
  MetricReport r;
  r.session_id = session.session_id;
  r.subject_kind = session.subject_kind;
  r.n_episodes = session.episodes.size();
  r.n_steps = session.total_steps();
  const Tables t = build_tables(session);
  r.alphabet_size = t.visits.total.size();
  r.transitions = t.transitions.total();
  r.entropy_curve = entropy_curve(t.visits);
  r.overall_entropy = t.visits.total.empty() ? 0.0 : entropy(t.visits);
  r.info_gain_curve = info_gain_curve(t.transitions);
  for (const auto& v : r.info_gain_curve)
    if (v) {
      r.overall_info_gain = mean_defined(r.info_gain_curve);
      break;
    }
  const auto emp = empowerment(t.transitions, r.alphabet_size, interaction_actions(cfg));
  r.total_empowerment = emp.total;
  r.empowerment_converged = emp.all_converged;
  r.scores = exploration_scores(session, cfg);
  return r;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kCurveColumns = "session_id,episode,entropy,info_gain";
inline constexpr const char* kOverallColumns =
    "session_id,subject_kind,n_episodes,n_steps,alphabet_size,transitions,overall_entropy,overall_info_gain,"
    "total_empowerment,mean_achievement,map_coverage,overall_achievement,breadth,depth,empowerment_converged";

// Overall values that can be compared between groups of sessions.
inline constexpr std::array<std::string_view, 8> kReportMetrics = {
    "overall_entropy", "overall_info_gain", "total_empowerment", "mean_achievement",
    "map_coverage",    "overall_achievement", "breadth",         "depth"};

inline bool is_report_metric(std::string_view name) {
  return std::find(kReportMetrics.begin(), kReportMetrics.end(), name) != kReportMetrics.end();
}

inline std::string report_metric_list() {
  std::string out;
  for (auto m : kReportMetrics) {
    if (!out.empty()) out += ", ";
    out += m;
  }
  return out;
}

// Empty for an undefined value (overall_info_gain without counted transitions).
inline std::optional<double> metric_value(const MetricReport& r, std::string_view name) {
  if (name == "overall_entropy") return r.overall_entropy;
  if (name == "overall_info_gain") return r.overall_info_gain;
  if (name == "total_empowerment") return r.total_empowerment;
  if (name == "mean_achievement") return r.scores.mean_achievement;
  if (name == "map_coverage") return r.scores.map_coverage;
  if (name == "overall_achievement") return r.scores.overall_achievement;
  if (name == "breadth") return r.scores.breadth;
  if (name == "depth") return r.scores.depth;
  throw InputError("unknown metric '" + std::string(name) + "'; valid metrics: " + report_metric_list());
}

inline void write_curves_csv(std::ostream& os, const MetricReport& r, bool header = true) {
  if (header) os << kCurveColumns << '\n';
  for (std::size_t e = 0; e < r.entropy_curve.size(); ++e) {
    os << r.session_id << ',' << e << ',' << format_double(r.entropy_curve[e]) << ',';
    if (e < r.info_gain_curve.size() && r.info_gain_curve[e]) os << format_double(*r.info_gain_curve[e]);
    os << '\n';
  }
}

inline void write_overall_csv(std::ostream& os, const MetricReport& r, bool header = true) {
  if (header) os << kOverallColumns << '\n';
  os << r.session_id << ',' << r.subject_kind << ',' << r.n_episodes << ',' << r.n_steps << ','
     << r.alphabet_size << ',' << r.transitions << ',' << format_double(r.overall_entropy) << ','
     << (r.overall_info_gain ? format_double(*r.overall_info_gain) : std::string()) << ','
     << format_double(r.total_empowerment) << ',' << format_double(r.scores.mean_achievement) << ','
     << format_double(r.scores.map_coverage) << ',' << format_double(r.scores.overall_achievement) << ','
     << format_double(r.scores.breadth) << ',' << format_double(r.scores.depth) << ','
     << (r.empowerment_converged ? 1 : 0) << '\n';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// A comma-separated table with a header row; cells are kept as text.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw InputError("no column named '" + name + "'");
  }
};

inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (t.columns.empty()) {
      t.columns = std::move(cells);
      continue;
    }
    if (cells == t.columns) continue;  // concatenated files repeat the header
    if (cells.size() != t.columns.size())
      throw ParseError(line_no, "", "expected " + std::to_string(t.columns.size()) + " cells, got " +
                                        std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

inline CsvTable load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace crafterlab

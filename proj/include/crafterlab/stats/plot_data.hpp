#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crafterlab/analytics/report.hpp"

namespace crafterlab {

struct GroupedReport {
  std::string group;
  MetricReport report;
};

struct CurveSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
};

inline CurveSummary summarize(const std::vector<double>& v) {
  CurveSummary s;
  s.n = v.size();
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

namespace detail {

inline std::optional<double> curve_value(const MetricReport& r, const std::string& metric, std::size_t e) {
  if (metric == "entropy") return e < r.entropy_curve.size() ? std::optional<double>(r.entropy_curve[e]) : std::nullopt;
  return e < r.info_gain_curve.size() ? r.info_gain_curve[e] : std::nullopt;
}

inline std::size_t curve_length(const MetricReport& r) {
  return std::max(r.entropy_curve.size(), r.info_gain_curve.size());
}

inline std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace detail

inline constexpr const char* kCurveSummaryColumns = "group,metric,episode,n,mean,sd";
inline constexpr const char* kScatterColumns = "group,session_id,x_metric,x,y_metric,y";

// Per-group mean and sd of each curve at every episode index. Reports that are
// shorter than the index, or have no value there, are left out of that row.
inline void write_curve_summary(std::ostream& os, const std::vector<GroupedReport>& reports) {
  os << kCurveSummaryColumns << '\n';
  std::map<std::string, std::vector<const MetricReport*>> groups;
  for (const auto& g : reports) groups[g.group].push_back(&g.report);
  for (const char* metric : {"entropy", "info_gain"})
    for (const auto& [group, rs] : groups) {
      std::size_t len = 0;
      for (const auto* r : rs) len = std::max(len, detail::curve_length(*r));
      for (std::size_t e = 0; e < len; ++e) {
        std::vector<double> vals;
        for (const auto* r : rs)
          if (auto v = detail::curve_value(*r, metric, e)) vals.push_back(*v);
        const auto s = summarize(vals);
        os << group << ',' << metric << ',' << e << ',' << s.n << ',';
        if (s.n > 0) os << format_double(s.mean) << ',' << format_double(s.sd);
        else os << ',';
        os << '\n';
      }
    }
}

// One column per session, rows aligned on episode index, blanks where a
// session has no value.
inline void write_curve_wide(std::ostream& os, const std::vector<GroupedReport>& reports, const std::string& metric) {
  os << "episode";
  std::size_t len = 0;
  for (const auto& g : reports) {
    os << ',' << g.group << ':' << g.report.session_id;
    len = std::max(len, detail::curve_length(g.report));
  }
  os << '\n';
  for (std::size_t e = 0; e < len; ++e) {
    os << e;
    for (const auto& g : reports) os << ',' << detail::cell(detail::curve_value(g.report, metric, e));
    os << '\n';
  }
}

inline void write_histogram_data(std::ostream& os, const std::vector<GroupedReport>& reports) {
  os << "group," << kOverallColumns << '\n';
  for (const auto& g : reports) {
    os << g.group << ',';
    write_overall_csv(os, g.report, false);
  }
}

inline void write_scatter(std::ostream& os, const std::vector<GroupedReport>& reports) {
  os << kScatterColumns << '\n';
  for (const auto& g : reports) {
    const auto& r = g.report;
    const std::pair<const char*, std::optional<double>> xs[] = {
        {"entropy", r.overall_entropy}, {"info_gain", r.overall_info_gain}, {"empowerment", r.total_empowerment}};
    const std::pair<const char*, double> ys[] = {{"overall_achievement", r.scores.overall_achievement},
                                                 {"mean_achievement", r.scores.mean_achievement},
                                                 {"map_coverage", r.scores.map_coverage}};
    for (const auto& [xm, x] : xs)
      for (const auto& [ym, y] : ys)
        os << g.group << ',' << r.session_id << ',' << xm << ',' << detail::cell(x) << ',' << ym << ','
           << format_double(y) << '\n';
  }
}

// Writes histograms.csv, curves.csv, curves_entropy.csv, curves_info_gain.csv
// and scatter.csv into `dir`. Returns the paths written.
inline std::vector<std::filesystem::path> export_plot_data(const std::vector<GroupedReport>& reports,
                                                           const std::filesystem::path& dir) {
  if (reports.empty()) throw InputError("no reports to export");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  auto emit = [&](const char* name, auto&& fn) {
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write '" + path.string() + "'");
    fn(os);
    out.push_back(path);
  };
  emit("histograms.csv", [&](std::ostream& os) { write_histogram_data(os, reports); });
  emit("curves.csv", [&](std::ostream& os) { write_curve_summary(os, reports); });
  emit("curves_entropy.csv", [&](std::ostream& os) { write_curve_wide(os, reports, "entropy"); });
  emit("curves_info_gain.csv", [&](std::ostream& os) { write_curve_wide(os, reports, "info_gain"); });
  emit("scatter.csv", [&](std::ostream& os) { write_scatter(os, reports); });
  return out;
}

}  // namespace crafterlab

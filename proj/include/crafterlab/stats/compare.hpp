#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "crafterlab/analytics/report.hpp"
#include "crafterlab/stats/tests.hpp"

namespace crafterlab {

enum class CompareTest { ranksum, permutation };

inline CompareTest compare_test_from_name(const std::string& name) {
  if (name == "ranksum") return CompareTest::ranksum;
  if (name == "permutation") return CompareTest::permutation;
  throw InputError("unknown test '" + name + "'; valid tests: ranksum, permutation");
}

struct Comparison {
  std::string metric;
  std::string test;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double statistic = 0.0;  // rank sum of group a, or |mean difference|
  double p = 1.0;
  bool exact = false;
  std::uint64_t seed = 0;
  std::size_t permutations = 0;
};

inline Comparison compare_groups(const std::vector<double>& a, const std::vector<double>& b, const std::string& metric,
                                 CompareTest test, std::size_t n_perm = 10000, std::uint64_t seed = 0) {
  Comparison c;
  c.metric = metric;
  c.n_a = a.size();
  c.n_b = b.size();
  detail::require_sample(a, "a");
  detail::require_sample(b, "b");
  c.mean_a = detail::mean(a);
  c.mean_b = detail::mean(b);
  if (test == CompareTest::ranksum) {
    const auto r = wilcoxon_rank_sum(a, b);
    c.test = "ranksum";
    c.statistic = r.statistic;
    c.p = r.p;
    c.exact = r.exact;
  } else {
    const auto r = permutation_test_means(a, b, n_perm, seed);
    c.test = "permutation";
    c.statistic = r.observed;
    c.p = r.p;
    c.exact = r.exhaustive;
    c.seed = seed;
    c.permutations = r.permutations;
  }
  return c;
}

inline constexpr const char* kComparisonColumns = "metric,test,n_a,n_b,mean_a,mean_b,statistic,p,exact,seed,permutations";

inline void write_comparison_csv(std::ostream& os, const Comparison& c) {
  os << kComparisonColumns << '\n'
     << c.metric << ',' << c.test << ',' << c.n_a << ',' << c.n_b << ',' << format_double(c.mean_a) << ','
     << format_double(c.mean_b) << ',' << format_double(c.statistic) << ',' << format_double(c.p) << ','
     << (c.exact ? 1 : 0) << ',' << c.seed << ',' << c.permutations << '\n';
}

}  // namespace crafterlab

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/rng.hpp"

namespace crafterlab {

struct SampleSet {
  std::string label;
  std::vector<double> values;
};

namespace detail {

inline void require_sample(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw InputError(std::string("sample '") + name + "' is empty");
  for (double x : v)
    if (!std::isfinite(x)) throw InputError(std::string("sample '") + name + "' has a non-finite value");
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

// p-values never reach 0 even when the normal tail underflows.
inline double clamp_p(double p) { return std::clamp(p, std::numeric_limits<double>::min(), 1.0); }

}  // namespace detail

// Midranks (1-based) of `v`; ties share the average of the ranks they span.
inline std::vector<double> midranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = rank;
    i = j + 1;
  }
  return r;
}

struct RankSumResult {
  double statistic = 0.0;  // rank sum of the first sample
  double u = 0.0;          // Mann-Whitney U of the first sample
  double p = 1.0;          // two-sided
  bool exact = false;
};

inline constexpr std::size_t kExactRankSumLimit = 12;

// Counts of subsets of size k from ranks 1..n by rank sum.
inline std::vector<double> rank_sum_distribution(std::size_t n, std::size_t k) {
  const std::size_t max_sum = n * (n + 1) / 2;
  std::vector<std::vector<double>> dp(k + 1, std::vector<double>(max_sum + 1, 0.0));
  dp[0][0] = 1.0;
  for (std::size_t r = 1; r <= n; ++r)
    for (std::size_t c = std::min(k, r); c >= 1; --c)
      for (std::size_t s = max_sum; s >= r; --s) dp[c][s] += dp[c - 1][s - r];
  return dp[k];
}

inline RankSumResult wilcoxon_rank_sum(const std::vector<double>& a, const std::vector<double>& b) {
  detail::require_sample(a, "a");
  detail::require_sample(b, "b");
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  const auto ranks = midranks(all);
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  RankSumResult r;
  for (std::size_t i = 0; i < na; ++i) r.statistic += ranks[i];
  r.u = r.statistic - static_cast<double>(na * (na + 1)) / 2.0;

  std::vector<double> sorted(all);
  std::sort(sorted.begin(), sorted.end());
  const bool ties = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();

  if (n <= kExactRankSumLimit && !ties) {
    const auto dist = rank_sum_distribution(n, na);
    const auto w = static_cast<std::size_t>(std::llround(r.statistic));
    double lo = 0.0, hi = 0.0, total = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      total += dist[s];
      if (s <= w) lo += dist[s];
      if (s >= w) hi += dist[s];
    }
    r.p = std::min(1.0, 2.0 * std::min(lo, hi) / total);
    r.exact = true;
    return r;
  }

  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double dn = static_cast<double>(n);
  const double mu = static_cast<double>(na) * (dn + 1.0) / 2.0;
  const double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                     ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) {
    r.p = 1.0;
    return r;
  }
  const double z = std::max(0.0, std::fabs(r.statistic - mu) - 0.5) / std::sqrt(var);
  r.p = detail::clamp_p(std::erfc(z / std::sqrt(2.0)));
  return r;
}

inline RankSumResult wilcoxon_rank_sum(const SampleSet& a, const SampleSet& b) {
  return wilcoxon_rank_sum(a.values, b.values);
}

struct PermutationResult {
  double p = 1.0;
  double observed = 0.0;  // |mean(a) - mean(b)|
  std::size_t permutations = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
};

// Two-sided test on |mean(a) - mean(b)|. When every split of the pooled sample
// fits in `n_perm`, all splits are enumerated; otherwise p = (1 + hits)/(n_perm + 1).
inline PermutationResult permutation_test_means(const std::vector<double>& a, const std::vector<double>& b,
                                                std::size_t n_perm, std::uint64_t seed) {
  detail::require_sample(a, "a");
  detail::require_sample(b, "b");
  if (n_perm < 1) throw InputError("n_perm must be at least 1");
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t na = a.size(), n = pooled.size();
  const double total = std::accumulate(pooled.begin(), pooled.end(), 0.0);
  auto stat = [&](double sum_a) {
    return std::fabs(sum_a / static_cast<double>(na) - (total - sum_a) / static_cast<double>(n - na));
  };
  PermutationResult r;
  r.seed = seed;
  r.observed = std::fabs(detail::mean(a) - detail::mean(b));
  const double threshold = r.observed - 1e-12 * std::max(1.0, r.observed);

  if (detail::binomial(n, na) <= static_cast<double>(n_perm)) {
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(na), true);
    std::size_t hits = 0, count = 0;
    do {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) s += pooled[i];
      if (stat(s) >= threshold) ++hits;
      ++count;
    } while (std::prev_permutation(mask.begin(), mask.end()));
    r.p = static_cast<double>(hits) / static_cast<double>(count);
    r.permutations = count;
    r.exhaustive = true;
    return r;
  }

  Engine rng = make_engine(seed);
  std::vector<double> work(pooled);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n_perm; ++k) {
    // Partial Fisher-Yates: only the first na slots are needed.
    for (std::size_t i = 0; i < na; ++i) std::swap(work[i], work[i + uniform_index(rng, n - i)]);
    double s = 0.0;
    for (std::size_t i = 0; i < na; ++i) s += work[i];
    if (stat(s) >= threshold) ++hits;
  }
  r.p = static_cast<double>(hits + 1) / static_cast<double>(n_perm + 1);
  r.permutations = n_perm;
  return r;
}

enum class CorrelationMethod { spearman, pearson };

inline const char* method_name(CorrelationMethod m) { return m == CorrelationMethod::spearman ? "spearman" : "pearson"; }

inline std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = detail::mean(x), my = detail::mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct CorrelationResult {
  std::optional<double> rho;  // empty when either input has zero variance
  std::optional<double> p;
  CorrelationMethod method = CorrelationMethod::spearman;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
  std::string p_method = "permutation";
};

inline CorrelationResult correlation(const std::vector<double>& x, const std::vector<double>& y,
                                     CorrelationMethod method = CorrelationMethod::spearman,
                                     std::size_t resamples = 10000, std::uint64_t seed = 0) {
  if (x.size() != y.size())
    throw InputError("length mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.size() < 3) throw InputError("correlation needs at least 3 pairs");
  detail::require_sample(x, "x");
  detail::require_sample(y, "y");
  CorrelationResult r;
  r.method = method;
  r.resamples = resamples;
  r.seed = seed;
  const auto xs = method == CorrelationMethod::spearman ? midranks(x) : x;
  auto ys = method == CorrelationMethod::spearman ? midranks(y) : y;
  r.rho = pearson(xs, ys);
  if (!r.rho || resamples == 0) return r;
  Engine rng = make_engine(seed);
  const double threshold = std::fabs(*r.rho) - 1e-12;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < resamples; ++k) {
    for (std::size_t i = ys.size() - 1; i > 0; --i) std::swap(ys[i], ys[uniform_index(rng, i + 1)]);
    const auto rp = pearson(xs, ys);
    if (rp && std::fabs(*rp) >= threshold) ++hits;
  }
  r.p = static_cast<double>(hits + 1) / static_cast<double>(resamples + 1);
  return r;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;  // 0 when y is constant
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw InputError("length mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.size() < 2) throw InputError("linear fit needs at least 2 points");
  detail::require_sample(x, "x");
  detail::require_sample(y, "y");
  const double mx = detail::mean(x), my = detail::mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw InputError("x is constant");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r = pearson(x, y).value_or(0.0);
  return f;
}

}  // namespace crafterlab

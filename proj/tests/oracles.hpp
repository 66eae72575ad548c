#pragma once

// Brute-force reference computations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// I(p; W) in nats, evaluated directly.
inline double mutual_information(const std::vector<double>& p, const std::vector<std::vector<double>>& w) {
  const std::size_t m = w.front().size();
  std::vector<double> q(m, 0.0);
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t j = 0; j < m; ++j) q[j] += p[a] * w[a][j];
  double mi = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t j = 0; j < m; ++j)
      if (p[a] > 0.0 && w[a][j] > 0.0) mi += p[a] * w[a][j] * std::log(w[a][j] / q[j]);
  return mi;
}

namespace detail {

// Visit every p on the simplex with coordinates lo[i] + k*h (k >= 0, p[i] <= hi[i]).
template <class F>
void simplex_grid(std::size_t n, double h, const std::vector<double>& lo, const std::vector<double>& hi, F&& f) {
  std::vector<double> p(n);
  auto rec = [&](auto&& self, std::size_t i, double remaining) -> void {
    if (i + 1 == n) {
      if (remaining < lo[i] - 1e-12 || remaining > hi[i] + 1e-12) return;
      p[i] = std::max(0.0, remaining);
      f(p);
      return;
    }
    for (double v = lo[i]; v <= std::min(hi[i], remaining) + 1e-12; v += h) {
      p[i] = std::max(0.0, v);
      self(self, i + 1, remaining - p[i]);
    }
  };
  rec(rec, 0, 1.0);
}

}  // namespace detail

// Maximizes I(p; W) over a grid on the input simplex. A coarse grid is refined
// around the incumbent until the step reaches `resolution`; mutual information
// is concave in p, so refinement stays near the global maximum.
inline double grid_search_capacity(const std::vector<std::vector<double>>& w, double resolution = 1e-4) {
  const std::size_t n = w.size();
  if (n == 1) return 0.0;
  double h = 0.02;
  std::vector<double> lo(n, 0.0), hi(n, 1.0), best(n, 1.0 / static_cast<double>(n));
  double best_val = mutual_information(best, w);
  while (true) {
    detail::simplex_grid(n, h, lo, hi, [&](const std::vector<double>& p) {
      const double v = mutual_information(p, w);
      if (v > best_val) {
        best_val = v;
        best = p;
      }
    });
    if (h <= resolution * (1 + 1e-9)) break;
    const double next = std::max(resolution, h / 10.0);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::max(0.0, best[i] - 2 * h);
      hi[i] = std::min(1.0, best[i] + 2 * h);
      // Snap the window to the finer lattice so the incumbent stays on it.
      lo[i] = best[i] - std::floor((best[i] - lo[i]) / next + 1e-9) * next;
    }
    h = next;
  }
  return best_val;
}

// Two-sided exact rank-sum p by enumerating every assignment of the pooled
// sample to the first group.
inline double rank_sum_enumeration_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), na = a.size();
  // Doubled midranks keep everything integral.
  std::vector<std::int64_t> rank2(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      less += pooled[j] < pooled[i];
      equal += pooled[j] == pooled[i];
    }
    rank2[i] = 2 * less + equal + 1;
  }
  std::int64_t observed = 0;
  for (std::size_t i = 0; i < na; ++i) observed += rank2[i];
  std::uint64_t le = 0, ge = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s += rank2[i];
    ++total;
    le += s <= observed;
    ge += s >= observed;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total));
}

}  // namespace oracle

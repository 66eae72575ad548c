#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "crafterlab/core/errors.hpp"

namespace crafterlab {

inline constexpr double kNatsPerBit = 0.69314718055994530942;

inline double nats_to_bits(double nats) { return nats / kNatsPerBit; }

// p(s'|a,s) for a single state s. Rows are actions, columns index `alphabet`.
struct ChannelMatrix {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> alphabet;
  std::vector<std::string> actions;

  std::size_t n_inputs() const { return rows.size(); }
  std::size_t n_outputs() const { return rows.empty() ? alphabet.size() : rows.front().size(); }
};

inline void validate(const ChannelMatrix& ch, double row_tol = 1e-9) {
  if (ch.rows.empty()) throw InputError("channel has no rows");
  const std::size_t m = ch.rows.front().size();
  if (m == 0) throw InputError("channel has no outputs");
  for (std::size_t a = 0; a < ch.rows.size(); ++a) {
    const auto& row = ch.rows[a];
    if (row.size() != m) throw InputError("channel row " + std::to_string(a) + " has the wrong width");
    double sum = 0.0;
    for (double w : row) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw InputError("channel row " + std::to_string(a) + " has a negative or non-finite entry");
      sum += w;
    }
    if (std::fabs(sum - 1.0) > row_tol)
      throw InputError("channel row " + std::to_string(a) + " sums to " + std::to_string(sum));
  }
}

struct CapacityResult {
  double capacity = 0.0;
  std::vector<double> input_distribution;
  double upper_bound = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct CapacityOptions {
  double tol = 1e-9;
  int max_iter = 10000;
};

// Blahut-Arimoto from a uniform input distribution. Each iteration computes
// D(a) = KL(W(.|a) || q) and the bounds ln sum_a p(a) e^D(a) <= C <= max_a D(a);
// iteration stops once the gap is below `tol`.
inline CapacityResult channel_capacity(const ChannelMatrix& ch, CapacityOptions opt = {}) {
  validate(ch);
  if (opt.tol <= 0.0) throw InputError("tol must be positive");
  if (opt.max_iter < 1) throw InputError("max_iter must be at least 1");
  const std::size_t n = ch.rows.size();
  const std::size_t m = ch.rows.front().size();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> q(m), d(n);
  CapacityResult r;
  for (int it = 1; it <= opt.max_iter; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t j = 0; j < m; ++j) q[j] += p[a] * ch.rows[a][j];
    double dmax = -INFINITY;
    for (std::size_t a = 0; a < n; ++a) {
      double kl = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double w = ch.rows[a][j];
        if (w > 0.0) kl += w * std::log(w / q[j]);
      }
      d[a] = std::max(kl, 0.0);
      dmax = std::max(dmax, d[a]);
    }
    // Shift by dmax so the exponentials stay in (0, 1].
    double z = 0.0;
    for (std::size_t a = 0; a < n; ++a) z += p[a] * std::exp(d[a] - dmax);
    const double lower = dmax + std::log(z);
    r.capacity = std::max(lower, 0.0);
    r.upper_bound = dmax;
    r.iterations = it;
    r.input_distribution = p;
    if (dmax - lower < opt.tol) {
      r.converged = true;
      break;
    }
    for (std::size_t a = 0; a < n; ++a) p[a] = p[a] * std::exp(d[a] - dmax) / z;
  }
  return r;
}

}  // namespace crafterlab

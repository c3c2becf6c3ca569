// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "markov/counts.hpp"
#include "markov/random.hpp"

namespace oracles {

// --- chi-squared upper tail by adaptive Simpson quadrature -----------------

inline double chi2_density(double x, double df) {
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * df;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

namespace detail {

inline double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(double (*f)(double, double), double df, double a, double b,
                               double fa, double fm, double fb, double whole, double eps,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm, df);
  const double frm = f(rm, df);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, df, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, df, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

// P(X >= x0) for X ~ chi2(df), integrating the density over [x0, x0 + span].
// The truncated tail is far below the comparison tolerance for df <= 20.
inline double chi2_sf_quadrature(double x0, double df, double eps = 1e-12) {
  const double upper = x0 + 400.0 + 20.0 * df;
  const double m = 0.5 * (x0 + upper);
  const double fa = chi2_density(x0, df);
  const double fm = chi2_density(m, df);
  const double fb = chi2_density(upper, df);
  const double whole = detail::simpson(fa, fm, fb, x0, upper);
  return detail::adaptive_simpson(chi2_density, df, x0, upper, fa, fm, fb, whole, eps, 60);
}

// --- Monte Carlo Dirichlet-averaging estimate of the evidence --------------

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// Samples every observed row from a symmetric Dirichlet(alpha) and averages
// the likelihood of the counts. Linear domain: intended for tiny corpora.
inline McEstimate mc_evidence(const markov::ContextCounts& counts, double alpha, int n_samples,
                              std::uint64_t seed) {
  markov::Rng rng(seed);
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (int s = 0; s < n_samples; ++s) {
    long double likelihood = 1.0L;
    for (const auto& [context, row] : counts.rows()) {
      const Eigen::VectorXd p = rng.dirichlet(alpha, counts.n_states());
      for (const auto& [state, count] : row.cells)
        likelihood *= std::pow(static_cast<long double>(p[static_cast<int>(state)]),
                               static_cast<long double>(count));
    }
    sum += likelihood;
    sum_sq += likelihood * likelihood;
  }
  McEstimate est;
  const long double n = static_cast<long double>(n_samples);
  est.mean = static_cast<double>(sum / n);
  const long double var = (sum_sq - sum * sum / n) / (n - 1.0L);
  est.se = static_cast<double>(std::sqrt(var / n));
  return est;
}

// --- brute-force modified competition ranking -------------------------------

// Sorts the row descending and walks explicit tie classes; every member of a
// class gets the class's last (worst) 1-based position.
inline int rank_oracle(const Eigen::VectorXd& row, int target) {
  std::vector<int> idx(static_cast<std::size_t>(row.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return row[a] > row[b]; });
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && row[idx[j + 1]] == row[idx[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) {
      if (idx[t] == target) return static_cast<int>(j) + 1;
    }
    i = j + 1;
  }
  return -1;  // unreachable for a valid target
}

}  // namespace oracles

#include "markov/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace markov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-12;

// Both expansions need on the order of sqrt(a) * ln(1/tol) terms when x is
// near a; a can reach 5e5 before the Wilson-Hilferty branch takes over.
constexpr int kMaxIter = 20000;

// Lower regularized incomplete gamma P(a, x) by power series, x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kTol)
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  throw std::runtime_error("regularized_gamma_q: series did not converge");
}

// Upper regularized incomplete gamma Q(a, x) by modified-Lentz continued
// fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kTol)
      return h * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  throw std::runtime_error("regularized_gamma_q: continued fraction did not converge");
}

// Wilson-Hilferty: (X/df)^(1/3) is approximately normal with mean
// 1 - 2/(9 df) and variance 2/(9 df).
double chi2_sf_wilson_hilferty(double x, double df) {
  const double mu = 1.0 - 2.0 / (9.0 * df);
  const double sigma = std::sqrt(2.0 / (9.0 * df));
  const double z = (std::cbrt(x / df) - mu) / sigma;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
  return std::lgamma(x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("regularized_gamma_q: a must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("regularized_gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, double df) {
  if (!(x >= 0.0)) throw std::domain_error("chi2_sf: x must be >= 0");
  if (!(df >= 1.0)) throw std::domain_error("chi2_sf: df must be >= 1");
  if (x == kInf) return 0.0;
  if (df > 1e6) return chi2_sf_wilson_hilferty(x, df);
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw std::domain_error("log_sum_exp: empty input");
  const double max = *std::max_element(values.begin(), values.end());
  if (max == -kInf) return -kInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

LogReal& LogReal::operator+=(LogReal other) {
  const double pair[2] = {log_, other.log_};
  log_ = log_sum_exp(pair);
  return *this;
}

}  // namespace markov

#pragma once

#include <limits>
#include <span>

namespace markov {

// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series for x < a + 1, modified-Lentz continued fraction
// otherwise; throws if 500 iterations do not converge to 1e-12.
double regularized_gamma_q(double a, double x);

// Upper tail P(X >= x) of a chi-squared variable with df degrees of freedom,
// i.e. Q(df/2, x/2). df is a real so that state spaces whose parameter counts
// overflow 64-bit integers remain usable; above df = 1e6 the Wilson-Hilferty
// cube-root normal approximation is used.
double chi2_sf(double x, double df);

// max(v) + ln(sum(exp(v - max(v)))). Exact -inf when every input is -inf.
// Throws std::domain_error on an empty list.
double log_sum_exp(std::span<const double> values);

// A nonnegative quantity stored as its natural log; -inf encodes zero.
// Multiplication adds logs, addition goes through log_sum_exp, so values
// never leave the log domain.
class LogReal {
 public:
  LogReal() : log_(-std::numeric_limits<double>::infinity()) {}

  static LogReal from_log(double log_value) {
    LogReal r;
    r.log_ = log_value;
    return r;
  }
  static LogReal one() { return from_log(0.0); }
  static LogReal zero() { return LogReal(); }

  double log() const { return log_; }
  bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

  LogReal& operator*=(LogReal other) {
    log_ += other.log_;
    return *this;
  }
  friend LogReal operator*(LogReal a, LogReal b) { return a *= b; }

  LogReal& operator+=(LogReal other);
  friend LogReal operator+(LogReal a, LogReal b) { return a += b; }

 private:
  double log_;
};

}  // namespace markov

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace markov {

// AIC(k) = eta - 2 (|S|^m - |S|^k)(|S| - 1), the Tong loss for testing an
// order-k chain against a reference order m.
double aic(double eta, int n_states, int k, int m);

// BIC(k) = eta - (|S|^m - |S|^k)(|S| - 1) ln(n); the extra ln(n) factor makes
// the estimator consistent.
double bic(double eta, int n_states, int k, int m, std::uint64_t n_observations);

// Index of the minimum score; ties break toward the smallest order.
int select_order(std::span<const double> scores);

// Both criteria for k = 0..m, where m is the highest order fitted. Scores at
// k = m are zero by construction.
struct CriterionTable {
  int reference_order = 0;
  std::uint64_t n_observations = 0;
  std::vector<double> aic;
  std::vector<double> bic;
  int selected_aic = 0;
  int selected_bic = 0;
};

// log_likelihoods[k] is the maximum-likelihood fit at order k; the last entry
// is the reference order.
CriterionTable criterion_table(std::span<const double> log_likelihoods, int n_states,
                               std::uint64_t n_observations);

}  // namespace markov

#pragma once

#include <unordered_map>

#include <Eigen/Core>

#include "markov/context.hpp"
#include "markov/counts.hpp"

namespace markov {

// Order-k row distributions over all n_states next states. rows holds one
// dense vector per context seen in training; default_row answers queries for
// contexts never observed (uniform when alpha > 0, all-zero mass for a pure
// maximum-likelihood fit). Every materialized row sums to 1.
struct MarkovModel {
  int order = 0;
  int n_states = 0;
  double alpha = 0.0;  // smoothing used to build the rows; 0 = pure MLE
  std::unordered_map<ContextKey, Eigen::VectorXd, ContextKeyHash> rows;
  Eigen::VectorXd default_row;

  const Eigen::VectorXd& row(const ContextKey& context) const {
    auto it = rows.find(context);
    return it == rows.end() ? default_row : it->second;
  }
};

// p(next | context) = n(context, next) / n(context) per observed context.
// Throws std::invalid_argument on empty counts.
MarkovModel fit_mle(const ContextCounts& counts);

// Sum over cells of n * ln p under the model. The initial-state factor is
// identically 1 under boundary-state preparation, so it contributes nothing.
// Returns -inf when the model puts zero mass on an observed transition.
double log_likelihood(const ContextCounts& counts, const MarkovModel& model);

// -2 (ll_null - ll_alt), >= 0 for nested maximum-likelihood fits. A result
// below -1e-9 signals non-nested inputs and throws.
double likelihood_ratio(double ll_null, double ll_alt);

// (|S|^m - |S|^k)(|S| - 1), in floating point so page-scale vocabularies do
// not overflow. include_reset controls whether the boundary state counts
// toward |S| (it does by default).
double lrt_degrees_of_freedom(int n_states, int k, int m, bool include_reset = true);

struct LrtResult {
  int k_null = 0;
  int m_alt = 0;
  double eta = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Likelihood-ratio test of order k against order m > k on the same corpus:
// both orders are fit by maximum likelihood and the statistic is referred to
// a chi-squared distribution with lrt_degrees_of_freedom degrees of freedom.
LrtResult lrt_test(const PathCorpus& corpus, int k, int m, bool include_reset_in_df = true);
LrtResult lrt_test_from_lls(double ll_k, double ll_m, int n_states, int k, int m,
                            bool include_reset_in_df = true);

}  // namespace markov

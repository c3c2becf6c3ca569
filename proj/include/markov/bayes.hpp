#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "markov/counts.hpp"
#include "markov/likelihood.hpp"

namespace markov {

// ln P(D | order-k model) with a symmetric Dirichlet(alpha) prior on every
// row: the parameters integrate out row by row, so the evidence is a product
// of Dirichlet-multinomial marginals over the observed contexts only
// (unobserved contexts contribute a factor of exactly 1). Throws
// std::domain_error for alpha <= 0.
double log_evidence(const ContextCounts& counts, double alpha);

// Posterior expectation (n_j + alpha) / (n + n_states * alpha) as a dense
// row; a null/empty row yields the uniform distribution. alpha = 1 is
// Laplace smoothing.
Eigen::VectorXd posterior_mean(const CountRow* row, double alpha, int n_states);
void posterior_mean_into(const CountRow* row, double alpha, int n_states, Eigen::VectorXd& out);

// Posterior-mean model over all observed contexts; unobserved contexts fall
// back to the uniform default row.
MarkovModel fit_posterior_mean(const ContextCounts& counts, double alpha);

enum class ModelPrior {
  kUniform,             // P(M_k) = 1 / |M|
  kExponentialPenalty,  // P(M_k) proportional to exp(-|S|^k (|S| - 1))
};

struct ModelPosterior {
  std::vector<double> log_evidence;  // index = order
  ModelPrior prior = ModelPrior::kUniform;
  std::vector<double> posterior;     // sums to 1
  int selected = 0;                  // argmax, ties toward the smallest order
};

// Normalizes per-order evidences into model probabilities, entirely in log
// domain. The exponential penalty saturates to -inf when |S|^k (|S| - 1)
// overflows, which correctly assigns those orders zero mass.
ModelPosterior model_posterior(std::span<const double> log_evidences, ModelPrior prior,
                               int n_states);

}  // namespace markov

#include "markov/bayes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "markov/numerics.hpp"

namespace markov {

double log_evidence(const ContextCounts& counts, double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("log_evidence: alpha must be > 0");
  const double s = static_cast<double>(counts.n_states());
  const double lg_row_prior = log_gamma(s * alpha);
  const double lg_alpha = log_gamma(alpha);
  LogReal evidence = LogReal::one();
  for (const auto& [context, row] : counts.rows()) {
    // ln Gamma(S a) - S ln Gamma(a) + sum_j ln Gamma(n_j + a) - ln Gamma(n + S a),
    // with the zero-count cells folded into the stored-cell sum.
    double term = lg_row_prior - static_cast<double>(row.cells.size()) * lg_alpha;
    for (const auto& [state, count] : row.cells)
      term += log_gamma(static_cast<double>(count) + alpha);
    term -= log_gamma(static_cast<double>(row.total) + s * alpha);
    evidence *= LogReal::from_log(term);
  }
  return evidence.log();
}

void posterior_mean_into(const CountRow* row, double alpha, int n_states, Eigen::VectorXd& out) {
  if (!(alpha > 0.0)) throw std::domain_error("posterior_mean: alpha must be > 0");
  out.setConstant(n_states, alpha);
  double total = static_cast<double>(n_states) * alpha;
  if (row != nullptr) {
    for (const auto& [state, count] : row->cells)
      out[static_cast<int>(state)] += static_cast<double>(count);
    total += static_cast<double>(row->total);
  }
  out /= total;
}

Eigen::VectorXd posterior_mean(const CountRow* row, double alpha, int n_states) {
  Eigen::VectorXd out;
  posterior_mean_into(row, alpha, n_states, out);
  return out;
}

MarkovModel fit_posterior_mean(const ContextCounts& counts, double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("fit_posterior_mean: alpha must be > 0");
  MarkovModel model;
  model.order = counts.order();
  model.n_states = counts.n_states();
  model.alpha = alpha;
  model.default_row =
      Eigen::VectorXd::Constant(counts.n_states(), 1.0 / static_cast<double>(counts.n_states()));
  model.rows.reserve(counts.context_count());
  for (const auto& [context, row] : counts.rows())
    model.rows.emplace(context, posterior_mean(&row, alpha, counts.n_states()));
  return model;
}

ModelPosterior model_posterior(std::span<const double> log_evidences, ModelPrior prior,
                               int n_states) {
  if (log_evidences.size() < 2)
    throw std::invalid_argument("model_posterior: need at least two orders");
  ModelPosterior result;
  result.log_evidence.assign(log_evidences.begin(), log_evidences.end());
  result.prior = prior;

  std::vector<double> log_unnorm(log_evidences.size());
  for (std::size_t k = 0; k < log_evidences.size(); ++k) {
    double log_prior = 0.0;  // uniform prior is a constant and cancels
    if (prior == ModelPrior::kExponentialPenalty) {
      const double s = static_cast<double>(n_states);
      const double model_states = std::pow(s, static_cast<double>(k)) * (s - 1.0);
      log_prior = -model_states;  // -inf on overflow: unselectable anyway
    }
    log_unnorm[k] = log_evidences[k] + log_prior;
  }
  const double log_norm = log_sum_exp(log_unnorm);
  result.posterior.resize(log_unnorm.size());
  result.selected = 0;
  for (std::size_t k = 0; k < log_unnorm.size(); ++k) {
    result.posterior[k] = std::exp(log_unnorm[k] - log_norm);
    if (log_unnorm[k] > log_unnorm[static_cast<std::size_t>(result.selected)])
      result.selected = static_cast<int>(k);
  }
  return result;
}

}  // namespace markov

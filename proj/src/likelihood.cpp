#include "markov/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "markov/numerics.hpp"

namespace markov {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MarkovModel fit_mle(const ContextCounts& counts) {
  if (counts.total() == 0) throw std::invalid_argument("fit_mle: empty counts");
  MarkovModel model;
  model.order = counts.order();
  model.n_states = counts.n_states();
  model.alpha = 0.0;
  model.default_row = Eigen::VectorXd::Zero(counts.n_states());
  model.rows.reserve(counts.context_count());
  for (const auto& [context, row] : counts.rows()) {
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(counts.n_states());
    const double total = static_cast<double>(row.total);
    for (const auto& [state, count] : row.cells)
      dist[static_cast<int>(state)] = static_cast<double>(count) / total;
    model.rows.emplace(context, std::move(dist));
  }
  return model;
}

double log_likelihood(const ContextCounts& counts, const MarkovModel& model) {
  if (counts.order() != model.order)
    throw std::invalid_argument("log_likelihood: order mismatch");
  if (counts.n_states() != model.n_states)
    throw std::invalid_argument("log_likelihood: state count mismatch");
  double ll = 0.0;
  for (const auto& [context, row] : counts.rows()) {
    const Eigen::VectorXd& dist = model.row(context);
    for (const auto& [state, count] : row.cells) {
      const double p = dist[static_cast<int>(state)];
      if (p <= 0.0) return -kInf;
      ll += static_cast<double>(count) * std::log(p);
    }
  }
  return ll;
}

double likelihood_ratio(double ll_null, double ll_alt) {
  const double eta = -2.0 * (ll_null - ll_alt);
  if (eta < -1e-9)
    throw std::invalid_argument("likelihood_ratio: negative statistic, models are not nested");
  return eta < 0.0 ? 0.0 : eta;
}

double lrt_degrees_of_freedom(int n_states, int k, int m, bool include_reset) {
  if (k > m) throw std::invalid_argument("lrt_degrees_of_freedom: need k <= m");
  const double s = static_cast<double>(include_reset ? n_states : n_states - 1);
  return (std::pow(s, m) - std::pow(s, k)) * (s - 1.0);
}

LrtResult lrt_test_from_lls(double ll_k, double ll_m, int n_states, int k, int m,
                            bool include_reset_in_df) {
  if (k >= m) throw std::invalid_argument("lrt_test: need k < m");
  LrtResult result;
  result.k_null = k;
  result.m_alt = m;
  result.eta = likelihood_ratio(ll_k, ll_m);
  result.df = lrt_degrees_of_freedom(n_states, k, m, include_reset_in_df);
  result.p_value = chi2_sf(result.eta, result.df);
  return result;
}

LrtResult lrt_test(const PathCorpus& corpus, int k, int m, bool include_reset_in_df) {
  if (k >= m) throw std::invalid_argument("lrt_test: need k < m");
  const ContextCounts counts_k = count_transitions(corpus, k);
  const ContextCounts counts_m = count_transitions(corpus, m);
  const double ll_k = log_likelihood(counts_k, fit_mle(counts_k));
  const double ll_m = log_likelihood(counts_m, fit_mle(counts_m));
  return lrt_test_from_lls(ll_k, ll_m, corpus.n_states(), k, m, include_reset_in_df);
}

}  // namespace markov

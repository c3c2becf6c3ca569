#include "markov/infocrit.hpp"

#include <cmath>
#include <stdexcept>

#include "markov/likelihood.hpp"

namespace markov {

double aic(double eta, int n_states, int k, int m) {
  return eta - 2.0 * lrt_degrees_of_freedom(n_states, k, m);
}

double bic(double eta, int n_states, int k, int m, std::uint64_t n_observations) {
  if (n_observations < 1) throw std::invalid_argument("bic: need n >= 1");
  return eta - lrt_degrees_of_freedom(n_states, k, m) *
                   std::log(static_cast<double>(n_observations));
}

int select_order(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("select_order: empty scores");
  int best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] < scores[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

CriterionTable criterion_table(std::span<const double> log_likelihoods, int n_states,
                               std::uint64_t n_observations) {
  if (log_likelihoods.size() < 2)
    throw std::invalid_argument("criterion_table: need at least two orders");
  CriterionTable table;
  table.reference_order = static_cast<int>(log_likelihoods.size()) - 1;
  table.n_observations = n_observations;
  const double ll_ref = log_likelihoods.back();
  for (std::size_t k = 0; k < log_likelihoods.size(); ++k) {
    const double eta = likelihood_ratio(log_likelihoods[k], ll_ref);
    table.aic.push_back(aic(eta, n_states, static_cast<int>(k), table.reference_order));
    table.bic.push_back(
        bic(eta, n_states, static_cast<int>(k), table.reference_order, n_observations));
  }
  table.selected_aic = select_order(table.aic);
  table.selected_bic = select_order(table.bic);
  return table;
}

}  // namespace markov

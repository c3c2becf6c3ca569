#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "markov/bayes.hpp"
#include "markov/corpus.hpp"
#include "markov/crossval.hpp"
#include "markov/infocrit.hpp"
#include "markov/likelihood.hpp"

namespace markov {

struct SelectionOptions {
  int k_max = 5;
  double alpha = 1.0;
  int n_folds = 10;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = all hardware threads
  bool df_include_reset = true;        // count the boundary state in |S| for df
  bool bic_count_reset_targets = true; // n = clicks + terminations vs clicks only
  bool cv_rank_reset_targets = true;   // rank path terminations like any transition
};

struct LrtEntry {
  int k = 0;
  int m = 0;
  double eta = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  int significance = 0;  // 1: p < 0.01, 2: p < 0.001
};

// Everything the order-selection pipeline produces, one array entry per order
// 0..k_max throughout.
struct SelectionReport {
  int schema_version = 1;
  std::uint64_t n_paths = 0;
  std::uint64_t n_clicks = 0;
  std::uint64_t n_transitions = 0;  // prepared pairs: clicks + terminations
  int n_states = 0;
  int k_max = 0;
  double alpha = 1.0;
  int n_folds = 0;
  std::uint64_t seed = 0;

  std::vector<double> log_likelihood;          // per-order maximum-likelihood fit
  std::vector<LrtEntry> lrt;                   // all pairs k < m <= k_max
  std::vector<double> aic;
  std::vector<double> bic;
  std::vector<double> log_evidence;
  ModelPosterior posterior_uniform;
  ModelPosterior posterior_penalty;
  std::vector<CvResult> cv;

  int selected_aic = 0;
  int selected_bic = 0;
  int selected_bayes_uniform = 0;
  int selected_bayes_penalty = 0;
  int selected_cv = 0;
  int recommended_order = 0;  // the Bayesian (uniform prior) choice
};

// Runs all five selection methods over shared per-order counts (counted once
// per order; cross-validation recounts its own training folds).
SelectionReport run_selection(const PathCorpus& corpus, const SelectionOptions& options);

// Lossless JSON round trip.
std::string report_to_json(const SelectionReport& report, bool pretty = true);
SelectionReport report_from_json(const std::string& json_text);

// One CSV per panel: <prefix>likelihood.csv, lrt.csv, aic.csv, bic.csv,
// evidence.csv, posterior.csv, cv.csv.
void write_report_csv(const SelectionReport& report, const std::string& prefix);

}  // namespace markov

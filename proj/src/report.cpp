#include "markov/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

namespace markov {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to pre-sized slots so the schedule cannot affect the output.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  workers.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

SelectionReport run_selection(const PathCorpus& corpus, const SelectionOptions& options) {
  if (options.k_max < 1) throw std::invalid_argument("run_selection: k_max must be >= 1");
  if (options.k_max > kMaxOrder) throw std::invalid_argument("run_selection: k_max exceeds kMaxOrder");
  if (corpus.paths.empty()) throw InputError("run_selection: empty corpus");

  SelectionReport report;
  report.n_paths = corpus.n_paths();
  report.n_clicks = corpus.n_clicks;
  report.n_transitions = corpus.n_clicks + corpus.n_paths();
  report.n_states = corpus.n_states();
  report.k_max = options.k_max;
  report.alpha = options.alpha;
  report.n_folds = options.n_folds;
  report.seed = options.seed;

  const int n_orders = options.k_max + 1;
  std::vector<ContextCounts> counts;
  counts.reserve(static_cast<std::size_t>(n_orders));
  for (int k = 0; k < n_orders; ++k) counts.emplace_back(k, corpus.n_states());
  report.log_likelihood.resize(static_cast<std::size_t>(n_orders));
  report.log_evidence.resize(static_cast<std::size_t>(n_orders));
  report.cv.resize(static_cast<std::size_t>(n_orders));

  parallel_for(n_orders, options.threads, [&](int k) {
    counts[static_cast<std::size_t>(k)] = count_transitions(corpus, k);
    const ContextCounts& ck = counts[static_cast<std::size_t>(k)];
    report.log_likelihood[static_cast<std::size_t>(k)] = log_likelihood(ck, fit_mle(ck));
    report.log_evidence[static_cast<std::size_t>(k)] = log_evidence(ck, options.alpha);
  });

  for (int k = 0; k < options.k_max; ++k) {
    for (int m = k + 1; m <= options.k_max; ++m) {
      const LrtResult lrt = lrt_test_from_lls(
          report.log_likelihood[static_cast<std::size_t>(k)],
          report.log_likelihood[static_cast<std::size_t>(m)], corpus.n_states(), k, m,
          options.df_include_reset);
      LrtEntry entry;
      entry.k = k;
      entry.m = m;
      entry.eta = lrt.eta;
      entry.df = lrt.df;
      entry.p_value = lrt.p_value;
      entry.significance = lrt.p_value < 0.001 ? 2 : (lrt.p_value < 0.01 ? 1 : 0);
      report.lrt.push_back(entry);
    }
  }

  // The df term in AIC/BIC follows the same |S| convention as the tests.
  // That convention is baked into aic()/bic() via lrt_degrees_of_freedom, so
  // compute the tables directly here to honor the flag.
  const std::uint64_t n_obs =
      options.bic_count_reset_targets ? report.n_transitions : report.n_clicks;
  report.aic.resize(static_cast<std::size_t>(n_orders));
  report.bic.resize(static_cast<std::size_t>(n_orders));
  for (int k = 0; k < n_orders; ++k) {
    const double eta = likelihood_ratio(report.log_likelihood[static_cast<std::size_t>(k)],
                                        report.log_likelihood.back());
    const double df =
        lrt_degrees_of_freedom(corpus.n_states(), k, options.k_max, options.df_include_reset);
    report.aic[static_cast<std::size_t>(k)] = eta - 2.0 * df;
    report.bic[static_cast<std::size_t>(k)] =
        eta - df * std::log(static_cast<double>(n_obs));
  }
  report.selected_aic = select_order(report.aic);
  report.selected_bic = select_order(report.bic);

  report.posterior_uniform =
      model_posterior(report.log_evidence, ModelPrior::kUniform, corpus.n_states());
  report.posterior_penalty =
      model_posterior(report.log_evidence, ModelPrior::kExponentialPenalty, corpus.n_states());
  report.selected_bayes_uniform = report.posterior_uniform.selected;
  report.selected_bayes_penalty = report.posterior_penalty.selected;

  CvOptions cv_options;
  cv_options.rank_reset_targets = options.cv_rank_reset_targets;
  parallel_for(n_orders, options.threads, [&](int k) {
    report.cv[static_cast<std::size_t>(k)] =
        cross_validate(corpus, k, options.n_folds, options.alpha, options.seed, cv_options);
  });
  std::vector<double> mean_ranks;
  mean_ranks.reserve(report.cv.size());
  for (const auto& cv : report.cv) mean_ranks.push_back(cv.mean_rank);
  report.selected_cv = select_order(mean_ranks);

  report.recommended_order = report.selected_bayes_uniform;
  return report;
}

namespace {

nlohmann::json posterior_to_json(const ModelPosterior& posterior) {
  return {{"log_evidence", posterior.log_evidence},
          {"prior", posterior.prior == ModelPrior::kUniform ? "uniform" : "exponential-penalty"},
          {"posterior", posterior.posterior},
          {"selected", posterior.selected}};
}

ModelPosterior posterior_from_json(const nlohmann::json& j) {
  ModelPosterior posterior;
  posterior.log_evidence = j.at("log_evidence").get<std::vector<double>>();
  posterior.prior = j.at("prior").get<std::string>() == "uniform"
                        ? ModelPrior::kUniform
                        : ModelPrior::kExponentialPenalty;
  posterior.posterior = j.at("posterior").get<std::vector<double>>();
  posterior.selected = j.at("selected").get<int>();
  return posterior;
}

}  // namespace

std::string report_to_json(const SelectionReport& report, bool pretty) {
  nlohmann::json j;
  j["schema_version"] = report.schema_version;
  j["corpus"] = {{"n_paths", report.n_paths},
                 {"n_clicks", report.n_clicks},
                 {"n_transitions", report.n_transitions},
                 {"n_states", report.n_states}};
  j["k_max"] = report.k_max;
  j["alpha"] = report.alpha;
  j["n_folds"] = report.n_folds;
  j["seed"] = report.seed;
  j["log_likelihood"] = report.log_likelihood;
  j["lrt"] = nlohmann::json::array();
  for (const auto& entry : report.lrt) {
    j["lrt"].push_back({{"k", entry.k},
                        {"m", entry.m},
                        {"eta", entry.eta},
                        {"df", entry.df},
                        {"p_value", entry.p_value},
                        {"significance", entry.significance}});
  }
  j["aic"] = report.aic;
  j["bic"] = report.bic;
  j["log_evidence"] = report.log_evidence;
  j["posterior_uniform"] = posterior_to_json(report.posterior_uniform);
  j["posterior_penalty"] = posterior_to_json(report.posterior_penalty);
  j["cv"] = nlohmann::json::array();
  for (const auto& cv : report.cv) {
    j["cv"].push_back({{"order", cv.order},
                       {"fold_avg_rank", cv.fold_avg_rank},
                       {"mean_rank", cv.mean_rank},
                       {"stddev_rank", cv.stddev_rank}});
  }
  j["selected"] = {{"aic", report.selected_aic},
                   {"bic", report.selected_bic},
                   {"bayes_uniform", report.selected_bayes_uniform},
                   {"bayes_penalty", report.selected_bayes_penalty},
                   {"cv", report.selected_cv}};
  j["recommended_order"] = report.recommended_order;
  return pretty ? j.dump(2) + "\n" : j.dump();
}

SelectionReport report_from_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  SelectionReport report;
  report.schema_version = j.at("schema_version").get<int>();
  report.n_paths = j.at("corpus").at("n_paths").get<std::uint64_t>();
  report.n_clicks = j.at("corpus").at("n_clicks").get<std::uint64_t>();
  report.n_transitions = j.at("corpus").at("n_transitions").get<std::uint64_t>();
  report.n_states = j.at("corpus").at("n_states").get<int>();
  report.k_max = j.at("k_max").get<int>();
  report.alpha = j.at("alpha").get<double>();
  report.n_folds = j.at("n_folds").get<int>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.log_likelihood = j.at("log_likelihood").get<std::vector<double>>();
  for (const auto& e : j.at("lrt")) {
    LrtEntry entry;
    entry.k = e.at("k").get<int>();
    entry.m = e.at("m").get<int>();
    entry.eta = e.at("eta").get<double>();
    entry.df = e.at("df").get<double>();
    entry.p_value = e.at("p_value").get<double>();
    entry.significance = e.at("significance").get<int>();
    report.lrt.push_back(entry);
  }
  report.aic = j.at("aic").get<std::vector<double>>();
  report.bic = j.at("bic").get<std::vector<double>>();
  report.log_evidence = j.at("log_evidence").get<std::vector<double>>();
  report.posterior_uniform = posterior_from_json(j.at("posterior_uniform"));
  report.posterior_penalty = posterior_from_json(j.at("posterior_penalty"));
  for (const auto& e : j.at("cv")) {
    CvResult cv;
    cv.order = e.at("order").get<int>();
    cv.fold_avg_rank = e.at("fold_avg_rank").get<std::vector<double>>();
    cv.mean_rank = e.at("mean_rank").get<double>();
    cv.stddev_rank = e.at("stddev_rank").get<double>();
    report.cv.push_back(cv);
  }
  report.selected_aic = j.at("selected").at("aic").get<int>();
  report.selected_bic = j.at("selected").at("bic").get<int>();
  report.selected_bayes_uniform = j.at("selected").at("bayes_uniform").get<int>();
  report.selected_bayes_penalty = j.at("selected").at("bayes_penalty").get<int>();
  report.selected_cv = j.at("selected").at("cv").get<int>();
  report.recommended_order = j.at("recommended_order").get<int>();
  return report;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out.precision(17);
  return out;
}

}  // namespace

void write_report_csv(const SelectionReport& report, const std::string& prefix) {
  {
    auto out = open_csv(prefix + "likelihood.csv");
    out << "k,log_likelihood\n";
    for (std::size_t k = 0; k < report.log_likelihood.size(); ++k)
      out << k << ',' << report.log_likelihood[k] << '\n';
  }
  {
    auto out = open_csv(prefix + "lrt.csv");
    out << "k,m,eta,df,p_value,significance\n";
    for (const auto& e : report.lrt)
      out << e.k << ',' << e.m << ',' << e.eta << ',' << e.df << ',' << e.p_value << ','
          << e.significance << '\n';
  }
  {
    auto out = open_csv(prefix + "aic.csv");
    out << "k,aic\n";
    for (std::size_t k = 0; k < report.aic.size(); ++k) out << k << ',' << report.aic[k] << '\n';
  }
  {
    auto out = open_csv(prefix + "bic.csv");
    out << "k,bic\n";
    for (std::size_t k = 0; k < report.bic.size(); ++k) out << k << ',' << report.bic[k] << '\n';
  }
  {
    auto out = open_csv(prefix + "evidence.csv");
    out << "k,log_evidence\n";
    for (std::size_t k = 0; k < report.log_evidence.size(); ++k)
      out << k << ',' << report.log_evidence[k] << '\n';
  }
  {
    auto out = open_csv(prefix + "posterior.csv");
    out << "k,posterior_uniform,posterior_penalty\n";
    for (std::size_t k = 0; k < report.posterior_uniform.posterior.size(); ++k)
      out << k << ',' << report.posterior_uniform.posterior[k] << ','
          << report.posterior_penalty.posterior[k] << '\n';
  }
  {
    auto out = open_csv(prefix + "cv.csv");
    out << "k,mean_rank,stddev_rank\n";
    for (const auto& cv : report.cv)
      out << cv.order << ',' << cv.mean_rank << ',' << cv.stddev_rank << '\n';
  }
}

}  // namespace markov

#include "markov/crossval.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "markov/bayes.hpp"
#include "markov/random.hpp"

namespace markov {

FoldAssignment stratified_folds(const PathCorpus& corpus, int n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw std::invalid_argument("stratified_folds: need >= 2 folds");
  if (corpus.n_paths() < static_cast<std::uint64_t>(n_folds))
    throw InputError("stratified_folds: fewer paths than folds");

  std::vector<std::uint32_t> order(corpus.paths.size());
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.shuffle(order);

  FoldAssignment folds;
  folds.n_folds = n_folds;
  folds.fold_of_path.resize(corpus.paths.size());
  folds.fold_clicks.assign(static_cast<std::size_t>(n_folds), 0);
  for (const std::uint32_t path : order) {
    std::uint32_t lightest = 0;
    for (std::uint32_t f = 1; f < static_cast<std::uint32_t>(n_folds); ++f) {
      if (folds.fold_clicks[f] < folds.fold_clicks[lightest]) lightest = f;
    }
    folds.fold_of_path[path] = lightest;
    folds.fold_clicks[lightest] += corpus.paths[path].size();
  }
  return folds;
}

int rank_in_row(const Eigen::VectorXd& row, StateId target) {
  if (static_cast<int>(target) >= row.size())
    throw std::invalid_argument("rank_in_row: target out of range");
  const double p = row[static_cast<int>(target)];
  int greater = 0;
  int equal = 0;
  for (int j = 0; j < row.size(); ++j) {
    if (row[j] > p)
      ++greater;
    else if (row[j] == p)
      ++equal;
  }
  return greater + equal;
}

CvResult cross_validate(const PathCorpus& corpus, int order, int n_folds, double alpha,
                        std::uint64_t seed, const CvOptions& options) {
  if (!(alpha > 0.0)) throw std::domain_error("cross_validate: alpha must be > 0");
  const FoldAssignment folds = stratified_folds(corpus, n_folds, derive_seed(seed, "cv-folds"));

  CvResult result;
  result.order = order;
  result.fold_avg_rank.resize(static_cast<std::size_t>(n_folds));
  const int n_states = corpus.n_states();
  Eigen::VectorXd row_buffer;

  for (int fold = 0; fold < n_folds; ++fold) {
    std::vector<std::uint32_t> train_paths;
    train_paths.reserve(corpus.paths.size());
    for (std::uint32_t p = 0; p < corpus.paths.size(); ++p) {
      if (folds.fold_of_path[p] != static_cast<std::uint32_t>(fold)) train_paths.push_back(p);
    }
    const ContextCounts train = count_transitions(corpus, order, train_paths);

    std::uint64_t rank_sum = 0;  // ranks are integers, so the sum is exact
    std::uint64_t n_ranked = 0;
    for (std::uint32_t p = 0; p < corpus.paths.size(); ++p) {
      if (folds.fold_of_path[p] != static_cast<std::uint32_t>(fold)) continue;
      for_each_prepared_pair(std::span<const StateId>(corpus.paths[p]), order,
                             [&](const ContextKey& context, StateId next) {
                               if (!options.rank_reset_targets && next == kResetState) return;
                               posterior_mean_into(train.find_row(context), alpha, n_states,
                                                   row_buffer);
                               rank_sum += static_cast<std::uint64_t>(
                                   rank_in_row(row_buffer, next));
                               ++n_ranked;
                             });
    }
    result.fold_avg_rank[static_cast<std::size_t>(fold)] =
        static_cast<double>(rank_sum) / static_cast<double>(n_ranked);
  }

  double mean = 0.0;
  for (const double r : result.fold_avg_rank) mean += r;
  mean /= static_cast<double>(n_folds);
  double var = 0.0;
  for (const double r : result.fold_avg_rank) var += (r - mean) * (r - mean);
  result.mean_rank = mean;
  result.stddev_rank = std::sqrt(var / static_cast<double>(n_folds - 1));
  return result;
}

double topk_hit_rate(const MarkovModel& model, const ContextCounts& test_counts, int top_k,
                     std::uint64_t seed) {
  if (top_k < 1) throw std::invalid_argument("topk_hit_rate: need K >= 1");
  if (test_counts.order() != model.order)
    throw std::invalid_argument("topk_hit_rate: order mismatch");
  Rng rng(derive_seed(seed, "topk-ties"));
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  for (const auto& [context, row] : test_counts.rows()) {
    const Eigen::VectorXd& dist = model.row(context);
    for (const auto& [state, count] : row.cells) {
      const double p = dist[static_cast<int>(state)];
      std::uint64_t greater = 0;
      std::uint64_t equal = 0;
      for (int j = 0; j < dist.size(); ++j) {
        if (dist[j] > p)
          ++greater;
        else if (dist[j] == p)
          ++equal;
      }
      total += count;
      if (greater >= static_cast<std::uint64_t>(top_k)) continue;
      if (greater + equal <= static_cast<std::uint64_t>(top_k)) {
        hits += count;
        continue;
      }
      // The target sits in the tie class straddling the boundary: it occupies
      // one of `slots` remaining places among `equal` tied states.
      const std::uint64_t slots = static_cast<std::uint64_t>(top_k) - greater;
      for (std::uint64_t i = 0; i < count; ++i) {
        if (rng.below(equal) < slots) ++hits;
      }
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace markov

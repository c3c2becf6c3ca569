#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "markov/corpus.hpp"
#include "markov/counts.hpp"
#include "markov/likelihood.hpp"

namespace markov {

// Whole paths assigned to folds; the shuffled paths go greedily to the
// currently lightest fold by click count, so fold click totals stay within a
// few percent of each other while a path's pairs never straddle folds.
struct FoldAssignment {
  int n_folds = 0;
  std::vector<std::uint32_t> fold_of_path;
  std::vector<std::uint64_t> fold_clicks;
};

FoldAssignment stratified_folds(const PathCorpus& corpus, int n_folds, std::uint64_t seed);

// Modified competition rank ("14445"): every member of a tie class gets the
// class's maximum rank, so uninformative all-tied rows rank everything at
// n_states. row must be a dense distribution; target must be a valid state.
int rank_in_row(const Eigen::VectorXd& row, StateId target);

struct CvOptions {
  bool rank_reset_targets = true;  // include path-termination transitions
};

struct CvResult {
  int order = 0;
  std::vector<double> fold_avg_rank;  // transition-weighted mean rank per fold
  double mean_rank = 0.0;
  double stddev_rank = 0.0;           // sample deviation across folds
};

// For each fold, trains a posterior-mean model (Dirichlet alpha) on the other
// folds' counts and averages the rank of the true next state over the
// held-out prepared pairs. Contexts absent from training rank every target at
// n_states. alpha must be > 0: without fake counts unseen targets would be
// unrankable. Deterministic per seed regardless of scheduling.
CvResult cross_validate(const PathCorpus& corpus, int order, int n_folds, double alpha,
                        std::uint64_t seed, const CvOptions& options = {});

// Fraction of test transitions whose true next state falls in the K states
// with the highest model probability; ties at the boundary are resolved by a
// seeded uniform draw among the tie class.
double topk_hit_rate(const MarkovModel& model, const ContextCounts& test_counts, int top_k,
                     std::uint64_t seed);

}  // namespace markov

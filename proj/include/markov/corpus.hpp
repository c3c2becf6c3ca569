#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "markov/context.hpp"

namespace markov {

// Ordered label <-> id bijection. Id 0 is the reserved boundary state, so a
// vocabulary always holds one state more than the distinct input labels.
class StateVocabulary {
 public:
  explicit StateVocabulary(std::string reset_label = "RESET");

  // Adds the label if new and returns its id. The reserved label is rejected.
  StateId intern(std::string_view label);

  std::optional<StateId> find(std::string_view label) const;
  const std::string& label(StateId id) const;
  const std::string& reset_label() const { return labels_[0]; }

  // Total state count, including the boundary state.
  int size() const { return static_cast<int>(labels_.size()); }

  friend bool operator==(const StateVocabulary&, const StateVocabulary&);

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, StateId, std::hash<std::string>, std::equal_to<>> index_;
};

// A corpus of state-id paths. Treat as immutable once built; every id in
// every path is a non-boundary vocabulary id.
struct PathCorpus {
  StateVocabulary vocabulary;
  std::vector<std::vector<StateId>> paths;
  std::uint64_t n_clicks = 0;  // sum of path lengths

  std::uint64_t n_paths() const { return paths.size(); }
  int n_states() const { return vocabulary.size(); }
};

struct LoadOptions {
  char delimiter = '\t';
  std::size_t min_path_length = 2;
  std::string reset_label = "RESET";
};

struct LoadResult {
  PathCorpus corpus;
  std::uint64_t n_dropped_short = 0;  // paths removed by the length filter
};

// One path per non-empty, non-'#' line; tokens split on the delimiter
// (consecutive delimiters collapse). Throws InputError if the corpus is empty
// after filtering or any token equals the reserved boundary label.
LoadResult load_corpus(std::istream& in, const LoadOptions& options = {});
LoadResult load_corpus_file(const std::string& path, const LoadOptions& options = {});

// Inverse of load_corpus; labels joined by the delimiter, one path per line.
void save_corpus(const PathCorpus& corpus, std::ostream& out, char delimiter = '\t');
void save_corpus_file(const PathCorpus& corpus, const std::string& path, char delimiter = '\t');

// The order-k training view of a path: k boundary ids are prepended and one
// boundary target is appended, so a path of length n yields n + 1 pairs and
// histories never leak across paths.
struct PreparedPair {
  ContextKey context;
  StateId next;

  friend bool operator==(const PreparedPair&, const PreparedPair&) = default;
};

struct PreparedSequence {
  int order = 0;
  std::vector<PreparedPair> pairs;
};

template <typename Fn>
void for_each_prepared_pair(std::span<const StateId> path, int order, Fn&& fn) {
  ContextKey context = ContextKey::all_reset(order);
  for (StateId state : path) {
    fn(context, state);
    context = context.shifted(state);
  }
  fn(context, kResetState);
}

template <typename Fn>
void for_each_prepared_pair(const PathCorpus& corpus, int order, Fn&& fn) {
  for (const auto& path : corpus.paths) for_each_prepared_pair<Fn&>(path, order, fn);
}

PreparedSequence prepare_sequences(const PathCorpus& corpus, int order);

// Synthetic corpus from the memoryless uniform process: each draw picks one
// of n_states symbols or a terminal that closes the current path; generation
// stops once total_clicks clicks have been emitted. Deterministic per seed.
PathCorpus generate_uniform_corpus(int n_states, std::uint64_t total_clicks, std::uint64_t seed);

// Full-alphabet transition rows: index 0 is the boundary state (a draw of 0
// terminates the path), indices 1..n are the real states. Contexts are over
// the same alphabet; contexts with boundary ids occur only at path starts.
using TransitionTensor = std::unordered_map<ContextKey, Eigen::VectorXd, ContextKeyHash>;

struct GeneratedCorpus {
  PathCorpus corpus;
  int order = 0;
  TransitionTensor true_rows;  // the generating rows, for oracle checks
};

// Samples n_paths paths from a true order-k chain whose rows are drawn once
// (lazily, keyed by context) from a symmetric Dirichlet(row_concentration)
// over the real states. Path lengths are geometric with the given mean: every
// context with at least one real state carries a constant termination mass
// 1 / mean_path_length. Small concentrations give peaked rows (strong
// memory). Deterministic per seed.
GeneratedCorpus generate_markov_corpus(int order, double row_concentration, int n_states,
                                       std::uint64_t n_paths, double mean_path_length,
                                       std::uint64_t seed);

// Same, but with explicit rows. Every referenced context must have a row and
// every row must be a distribution over n_states + 1 targets (throws
// InputError otherwise). Path lengths are governed entirely by the tensor's
// boundary column.
GeneratedCorpus generate_markov_corpus(int order, const TransitionTensor& rows, int n_states,
                                       std::uint64_t n_paths, std::uint64_t seed);

}  // namespace markov

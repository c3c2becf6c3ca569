#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "markov/context.hpp"
#include "markov/corpus.hpp"

namespace markov {

// Next-state counts for one context, kept sorted by state id. 64-bit so
// corpora of 1e7+ clicks cannot overflow.
struct CountRow {
  std::vector<std::pair<StateId, std::uint64_t>> cells;
  std::uint64_t total = 0;

  void add(StateId state, std::uint64_t n = 1);
  std::uint64_t count(StateId state) const;

  friend bool operator==(const CountRow&, const CountRow&) = default;
};

// Sparse order-k transition counts keyed by context tuple. Only observed
// contexts are materialized; the |S|^k space is never allocated. Immutable
// once built (sharable read-only across workers).
class ContextCounts {
 public:
  ContextCounts(int order, int n_states);

  void add(const ContextKey& context, StateId next, std::uint64_t n = 1);

  const CountRow* find_row(const ContextKey& context) const;
  const std::unordered_map<ContextKey, CountRow, ContextKeyHash>& rows() const { return rows_; }

  int order() const { return order_; }
  int n_states() const { return n_states_; }
  std::uint64_t total() const { return total_; }
  std::size_t context_count() const { return rows_.size(); }

  friend bool operator==(const ContextCounts& a, const ContextCounts& b) {
    return a.order_ == b.order_ && a.n_states_ == b.n_states_ && a.rows_ == b.rows_;
  }

 private:
  int order_;
  int n_states_;
  std::uint64_t total_ = 0;
  std::unordered_map<ContextKey, CountRow, ContextKeyHash> rows_;
};

// Aggregates the prepared order-k pairs of the corpus (or of the selected
// paths only). total() always equals n_clicks + n_paths of what was counted.
ContextCounts count_transitions(const PathCorpus& corpus, int order);
ContextCounts count_transitions(const PathCorpus& corpus, int order,
                                std::span<const std::uint32_t> path_indices);

// Cellwise sum. Orders and state counts must match.
ContextCounts merge(const ContextCounts& a, const ContextCounts& b);

// Sums rows over the oldest context positions down to new_order. Counting at
// new_order directly gives the identical result.
ContextCounts marginalize(const ContextCounts& counts, int new_order);

// One line per cell: context labels, next label, count; k + 2 columns,
// sorted by context then state for stable output.
void write_counts_csv(const ContextCounts& counts, const StateVocabulary& vocabulary,
                      std::ostream& out);

}  // namespace markov

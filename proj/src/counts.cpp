#include "markov/counts.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace markov {

void CountRow::add(StateId state, std::uint64_t n) {
  auto it = std::lower_bound(cells.begin(), cells.end(), state,
                             [](const auto& cell, StateId s) { return cell.first < s; });
  if (it != cells.end() && it->first == state) {
    it->second += n;
  } else {
    cells.insert(it, {state, n});
  }
  total += n;
}

std::uint64_t CountRow::count(StateId state) const {
  auto it = std::lower_bound(cells.begin(), cells.end(), state,
                             [](const auto& cell, StateId s) { return cell.first < s; });
  return (it != cells.end() && it->first == state) ? it->second : 0;
}

ContextCounts::ContextCounts(int order, int n_states) : order_(order), n_states_(n_states) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("ContextCounts: order out of range");
  if (n_states < 1) throw std::invalid_argument("ContextCounts: n_states must be >= 1");
}

void ContextCounts::add(const ContextKey& context, StateId next, std::uint64_t n) {
  if (context.size() != order_) throw std::invalid_argument("ContextCounts::add: wrong context length");
  rows_[context].add(next, n);
  total_ += n;
}

const CountRow* ContextCounts::find_row(const ContextKey& context) const {
  auto it = rows_.find(context);
  return it == rows_.end() ? nullptr : &it->second;
}

ContextCounts count_transitions(const PathCorpus& corpus, int order) {
  ContextCounts counts(order, corpus.n_states());
  for_each_prepared_pair(corpus, order, [&counts](const ContextKey& context, StateId next) {
    counts.add(context, next);
  });
  return counts;
}

ContextCounts count_transitions(const PathCorpus& corpus, int order,
                                std::span<const std::uint32_t> path_indices) {
  ContextCounts counts(order, corpus.n_states());
  for (const std::uint32_t i : path_indices) {
    for_each_prepared_pair(std::span<const StateId>(corpus.paths.at(i)), order,
                           [&counts](const ContextKey& context, StateId next) {
                             counts.add(context, next);
                           });
  }
  return counts;
}

ContextCounts merge(const ContextCounts& a, const ContextCounts& b) {
  if (a.order() != b.order() || a.n_states() != b.n_states())
    throw std::invalid_argument("merge: mismatched order or state count");
  ContextCounts out = a;
  for (const auto& [context, row] : b.rows()) {
    for (const auto& [state, count] : row.cells) out.add(context, state, count);
  }
  return out;
}

ContextCounts marginalize(const ContextCounts& counts, int new_order) {
  if (new_order < 0 || new_order > counts.order())
    throw std::invalid_argument("marginalize: new_order out of range");
  ContextCounts out(new_order, counts.n_states());
  for (const auto& [context, row] : counts.rows()) {
    const ContextKey reduced = context.suffix(new_order);
    for (const auto& [state, count] : row.cells) out.add(reduced, state, count);
  }
  return out;
}

void write_counts_csv(const ContextCounts& counts, const StateVocabulary& vocabulary,
                      std::ostream& out) {
  std::vector<ContextKey> contexts;
  contexts.reserve(counts.context_count());
  for (const auto& [context, row] : counts.rows()) contexts.push_back(context);
  std::sort(contexts.begin(), contexts.end());
  for (const auto& context : contexts) {
    const CountRow& row = *counts.find_row(context);
    for (const auto& [state, count] : row.cells) {
      for (int i = 0; i < context.size(); ++i) out << vocabulary.label(context[i]) << ',';
      out << vocabulary.label(state) << ',' << count << '\n';
    }
  }
}

}  // namespace markov

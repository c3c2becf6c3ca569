#include <doctest.h>

#include <sstream>

#include "markov/counts.hpp"
#include "markov/random.hpp"

using namespace markov;

namespace {

PathCorpus single_path_ab() {
  PathCorpus corpus;
  const StateId a = corpus.vocabulary.intern("A");
  const StateId b = corpus.vocabulary.intern("B");
  corpus.paths.push_back({a, b});
  corpus.n_clicks = 2;
  return corpus;
}

}  // namespace

TEST_CASE("count_transitions by hand at order 1") {
  const PathCorpus corpus = single_path_ab();
  const StateId a = *corpus.vocabulary.find("A");
  const StateId b = *corpus.vocabulary.find("B");
  const ContextCounts counts = count_transitions(corpus, 1);
  CHECK(counts.total() == 3);
  CHECK(counts.context_count() == 3);
  const StateId r = kResetState;
  CHECK(counts.find_row(ContextKey({&r, 1}))->count(a) == 1);
  CHECK(counts.find_row(ContextKey({&a, 1}))->count(b) == 1);
  CHECK(counts.find_row(ContextKey({&b, 1}))->count(kResetState) == 1);
}

TEST_CASE("count_transitions by hand at order 0") {
  const PathCorpus corpus = single_path_ab();
  const ContextCounts counts = count_transitions(corpus, 0);
  CHECK(counts.context_count() == 1);
  const CountRow& row = *counts.find_row(ContextKey());
  CHECK(row.count(*corpus.vocabulary.find("A")) == 1);
  CHECK(row.count(*corpus.vocabulary.find("B")) == 1);
  CHECK(row.count(kResetState) == 1);
  CHECK(row.total == 3);
}

TEST_CASE("n_total equals clicks plus paths at every order") {
  const GeneratedCorpus gen = generate_markov_corpus(2, 0.4, 6, 150, 7.0, 77);
  for (int k = 0; k <= 5; ++k) {
    const ContextCounts counts = count_transitions(gen.corpus, k);
    CHECK(counts.total() == gen.corpus.n_clicks + gen.corpus.n_paths());
    CHECK(counts.context_count() <= counts.total());
  }
}

TEST_CASE("merge identity and additivity") {
  const GeneratedCorpus gen = generate_markov_corpus(1, 0.6, 4, 50, 5.0, 13);
  const ContextCounts counts = count_transitions(gen.corpus, 2);
  const ContextCounts empty(2, gen.corpus.n_states());
  CHECK(merge(counts, empty) == counts);
  const ContextCounts doubled = merge(counts, counts);
  CHECK(doubled.total() == 2 * counts.total());
  for (const auto& [context, row] : counts.rows()) {
    for (const auto& [state, count] : row.cells)
      CHECK(doubled.find_row(context)->count(state) == 2 * count);
  }
  CHECK_THROWS_AS(merge(counts, ContextCounts(1, gen.corpus.n_states())), std::invalid_argument);
  CHECK_THROWS_AS(merge(counts, ContextCounts(2, 99)), std::invalid_argument);
}

TEST_CASE("sharded counting merged equals whole-corpus counting") {
  const GeneratedCorpus gen = generate_markov_corpus(1, 0.5, 5, 120, 6.0, 29);
  const ContextCounts whole = count_transitions(gen.corpus, 3);
  // Split paths arbitrarily into three shards.
  std::vector<std::uint32_t> shard_a, shard_b, shard_c;
  for (std::uint32_t i = 0; i < gen.corpus.paths.size(); ++i) {
    (i % 3 == 0 ? shard_a : (i % 3 == 1 ? shard_b : shard_c)).push_back(i);
  }
  const ContextCounts merged =
      merge(merge(count_transitions(gen.corpus, 3, shard_a), count_transitions(gen.corpus, 3, shard_b)),
            count_transitions(gen.corpus, 3, shard_c));
  CHECK(merged == whole);
}

TEST_CASE("marginalizing higher-order counts reproduces lower-order counts exactly") {
  const GeneratedCorpus gen = generate_markov_corpus(2, 0.3, 5, 100, 8.0, 41);
  const ContextCounts order4 = count_transitions(gen.corpus, 4);
  for (int k : {0, 1, 2, 3}) {
    CHECK(marginalize(order4, k) == count_transitions(gen.corpus, k));
  }
}

TEST_CASE("counts CSV dump is sorted and labeled") {
  const PathCorpus corpus = single_path_ab();
  const ContextCounts counts = count_transitions(corpus, 1);
  std::ostringstream out;
  write_counts_csv(counts, corpus.vocabulary, out);
  CHECK(out.str() == "RESET,A,1\nA,B,1\nB,RESET,1\n");
}

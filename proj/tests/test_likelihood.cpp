#include <doctest.h>

#include <cmath>
#include <limits>

#include "markov/likelihood.hpp"
#include "markov/numerics.hpp"
#include "markov/random.hpp"

using namespace markov;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ContextCounts single_row(std::initializer_list<std::pair<StateId, std::uint64_t>> cells,
                         int n_states) {
  ContextCounts counts(1, n_states);
  const StateId ctx = 1;
  for (const auto& [state, count] : cells) counts.add(ContextKey({&ctx, 1}), state, count);
  return counts;
}

}  // namespace

TEST_CASE("fit_mle normalizes rows by their totals") {
  const ContextCounts counts = single_row({{2, 3}, {3, 1}}, 4);
  const MarkovModel model = fit_mle(counts);
  const StateId ctx = 1;
  const Eigen::VectorXd& row = model.row(ContextKey({&ctx, 1}));
  CHECK(row[2] == doctest::Approx(0.75));
  CHECK(row[3] == doctest::Approx(0.25));
  CHECK(row.sum() == doctest::Approx(1.0).epsilon(1e-12));

  const ContextCounts counts2 = single_row({{0, 2}, {2, 1}, {3, 1}}, 4);
  const Eigen::VectorXd& row2 = fit_mle(counts2).row(ContextKey({&ctx, 1}));
  CHECK(row2[0] == doctest::Approx(0.5));
  CHECK(row2[2] == doctest::Approx(0.25));
  CHECK(row2[3] == doctest::Approx(0.25));

  CHECK_THROWS_AS(fit_mle(ContextCounts(1, 3)), std::invalid_argument);
}

TEST_CASE("fit_mle row sums are 1 within 1e-9 on random corpora") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GeneratedCorpus gen = generate_markov_corpus(1, 0.4, 6, 80, 6.0, seed);
    for (int k = 0; k <= 3; ++k) {
      const MarkovModel model = fit_mle(count_transitions(gen.corpus, k));
      for (const auto& [context, row] : model.rows) {
        CHECK(std::fabs(row.sum() - 1.0) < 1e-9);
        CHECK((row.array() >= 0.0).all());
      }
    }
  }
}

TEST_CASE("deterministic cycle fits to point-mass rows") {
  PathCorpus corpus;
  const StateId a = corpus.vocabulary.intern("a");
  const StateId b = corpus.vocabulary.intern("b");
  const StateId c = corpus.vocabulary.intern("c");
  for (int i = 0; i < 10; ++i) corpus.paths.push_back({a, b, c});
  corpus.n_clicks = 30;
  const MarkovModel model = fit_mle(count_transitions(corpus, 1));
  for (const auto& [context, row] : model.rows) CHECK(row.maxCoeff() == 1.0);
}

TEST_CASE("log_likelihood of a fit on its own counts") {
  const ContextCounts counts = single_row({{2, 3}, {3, 1}}, 4);
  const double ll = log_likelihood(counts, fit_mle(counts));
  CHECK(ll == doctest::Approx(3.0 * std::log(0.75) + std::log(0.25)).epsilon(1e-12));
  CHECK(ll == doctest::Approx(-2.2493).epsilon(1e-4));
}

TEST_CASE("log_likelihood is -inf when the model misses an observed transition") {
  const ContextCounts counts = single_row({{2, 3}, {3, 1}}, 4);
  const MarkovModel model = fit_mle(single_row({{2, 5}}, 4));
  CHECK(log_likelihood(counts, model) == -kInf);
  // A context the model never saw behaves the same under a pure MLE fit.
  ContextCounts other(1, 4);
  const StateId ctx = 2;
  other.add(ContextKey({&ctx, 1}), 3);
  CHECK(log_likelihood(other, model) == -kInf);
}

TEST_CASE("monotone nesting of maximum-likelihood fits") {
  Rng seeds(321);
  for (int trial = 0; trial < 10; ++trial) {
    const GeneratedCorpus gen = generate_markov_corpus(
        static_cast<int>(seeds.below(3)), 0.5, 3 + static_cast<int>(seeds.below(4)),
        30 + seeds.below(100), 5.0, seeds.next_u64());
    double prev = -kInf;
    for (int k = 0; k <= 5; ++k) {
      const ContextCounts counts = count_transitions(gen.corpus, k);
      const double ll = log_likelihood(counts, fit_mle(counts));
      CHECK(ll >= prev - 1e-9);
      prev = ll;
    }
  }
}

TEST_CASE("likelihood_ratio arithmetic and contract") {
  CHECK(likelihood_ratio(-100.0, -90.0) == doctest::Approx(20.0));
  CHECK(likelihood_ratio(-55.5, -55.5) == 0.0);
  CHECK(likelihood_ratio(-100.0, -100.0 + 1e-12) >= 0.0);
  CHECK_THROWS_AS(likelihood_ratio(-90.0, -100.0), std::invalid_argument);
}

TEST_CASE("degrees of freedom formula") {
  CHECK(lrt_degrees_of_freedom(3, 1, 2) == doctest::Approx(12.0));  // (9 - 3) * 2
  CHECK(lrt_degrees_of_freedom(3, 1, 2, /*include_reset=*/false) == doctest::Approx(2.0));
  CHECK(lrt_degrees_of_freedom(27, 0, 5) == doctest::Approx((std::pow(27.0, 5) - 1.0) * 26.0));
  // Page-scale vocabularies overflow 64-bit integers but not the double path.
  CHECK(lrt_degrees_of_freedom(360418, 0, 5) > 1e27);
}

TEST_CASE("lrt_test wires eta, df, and the chi-squared tail together") {
  const GeneratedCorpus gen = generate_markov_corpus(1, 0.3, 2, 200, 6.0, 9);
  const LrtResult result = lrt_test(gen.corpus, 1, 2);
  CHECK(result.eta >= 0.0);
  CHECK(result.df == lrt_degrees_of_freedom(3, 1, 2));
  CHECK(result.p_value == doctest::Approx(chi2_sf(result.eta, result.df)));
  CHECK_THROWS_AS(lrt_test(gen.corpus, 2, 2), std::invalid_argument);
}

TEST_CASE("eta = 20 at df = 2 gives the closed-form tail") {
  const LrtResult r = lrt_test_from_lls(-110.0, -100.0, 2, 0, 1);
  CHECK(r.eta == doctest::Approx(20.0));
  CHECK(r.df == doctest::Approx(2.0));
  CHECK(r.p_value == doctest::Approx(std::exp(-10.0)).epsilon(1e-9));
}

TEST_CASE("eta matches an independent recomputation") {
  const GeneratedCorpus gen = generate_markov_corpus(0, 1.0, 4, 100, 5.0, 88);
  const ContextCounts c0 = count_transitions(gen.corpus, 0);
  const ContextCounts c1 = count_transitions(gen.corpus, 1);
  const double ll0 = log_likelihood(c0, fit_mle(c0));
  const double ll1 = log_likelihood(c1, fit_mle(c1));
  const LrtResult r = lrt_test(gen.corpus, 0, 1);
  CHECK(r.eta == doctest::Approx(2.0 * (ll1 - ll0)).epsilon(1e-12));
}

#include <doctest.h>

#include <cmath>

#include "markov/bayes.hpp"
#include "markov/random.hpp"
#include "oracles.hpp"

using namespace markov;

TEST_CASE("log_evidence closed form for a single transition") {
  // Two states, one A -> B transition, alpha = 1: the row marginal is
  // Gamma(2)/(Gamma(1)Gamma(1)) * Gamma(1)Gamma(2)/Gamma(3) = 1/2.
  ContextCounts counts(1, 2);
  const StateId a = 1;
  counts.add(ContextKey({&a, 1}), 0);
  CHECK(log_evidence(counts, 1.0) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(log_evidence(counts, 0.0), std::domain_error);
  CHECK_THROWS_AS(log_evidence(counts, -1.0), std::domain_error);
}

TEST_CASE("log_evidence of empty counts is zero") {
  CHECK(log_evidence(ContextCounts(2, 5), 1.0) == 0.0);
}

TEST_CASE("log_evidence of the two-click path at order 1") {
  // Corpus {(A,B)} prepared with the boundary state: three one-count rows
  // over three states, each contributing 1/3.
  PathCorpus corpus;
  const StateId a = corpus.vocabulary.intern("A");
  const StateId b = corpus.vocabulary.intern("B");
  corpus.paths.push_back({a, b});
  corpus.n_clicks = 2;
  const ContextCounts counts = count_transitions(corpus, 1);
  CHECK(log_evidence(counts, 1.0) == doctest::Approx(std::log(1.0 / 27.0)).epsilon(1e-12));
}

TEST_CASE("log_evidence agrees with the Monte Carlo oracle on tiny corpora") {
  Rng seeds(5150);
  for (int trial = 0; trial < 4; ++trial) {
    const int n_states = 2 + static_cast<int>(seeds.below(2));
    ContextCounts counts(1, n_states);
    const int n_transitions = 4 + static_cast<int>(seeds.below(12));
    for (int t = 0; t < n_transitions; ++t) {
      const StateId ctx = static_cast<StateId>(seeds.below(static_cast<std::uint64_t>(n_states)));
      const StateId next = static_cast<StateId>(seeds.below(static_cast<std::uint64_t>(n_states)));
      counts.add(ContextKey({&ctx, 1}), next);
    }
    const double alpha = (trial % 2 == 0) ? 1.0 : 0.5;
    const auto mc = oracles::mc_evidence(counts, alpha, 200000, seeds.next_u64());
    const double exact = std::exp(log_evidence(counts, alpha));
    CHECK(std::fabs(exact - mc.mean) <= 3.0 * mc.se);
  }
}

TEST_CASE("log_evidence factorizes over rows") {
  ContextCounts counts(1, 3);
  const StateId a = 1, b = 2;
  counts.add(ContextKey({&a, 1}), 2, 3);
  counts.add(ContextKey({&a, 1}), 0, 1);
  counts.add(ContextKey({&b, 1}), 1, 2);
  ContextCounts row_a(1, 3);
  row_a.add(ContextKey({&a, 1}), 2, 3);
  row_a.add(ContextKey({&a, 1}), 0, 1);
  ContextCounts row_b(1, 3);
  row_b.add(ContextKey({&b, 1}), 1, 2);
  CHECK(log_evidence(counts, 0.7) ==
        doctest::Approx(log_evidence(row_a, 0.7) + log_evidence(row_b, 0.7)).epsilon(1e-12));
}

TEST_CASE("posterior_mean formula, uniform fallback, and MLE limit") {
  CountRow row;
  row.add(1, 2);
  const Eigen::VectorXd mean = posterior_mean(&row, 1.0, 2);
  CHECK(mean[1] == doctest::Approx(0.75));  // (2 + 1) / (2 + 2)
  CHECK(mean[0] == doctest::Approx(0.25));

  const Eigen::VectorXd uniform = posterior_mean(nullptr, 1.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(uniform[i] == doctest::Approx(0.25));

  CountRow scaled;
  scaled.add(1, 2000);
  const Eigen::VectorXd near_mle = posterior_mean(&scaled, 1.0, 2);
  CHECK(std::fabs(near_mle[1] - 1.0) < 1e-3);
  CHECK_THROWS_AS(posterior_mean(&row, 0.0, 2), std::domain_error);
}

TEST_CASE("posterior mean converges monotonically in L1 to the MLE") {
  CountRow base;
  base.add(1, 3);
  base.add(2, 1);
  Eigen::VectorXd mle(3);
  mle << 0.0, 0.75, 0.25;
  double prev = 2.0;
  for (int t = 0; t <= 4; ++t) {
    CountRow scaled;
    std::uint64_t factor = 1;
    for (int i = 0; i < t; ++i) factor *= 10;
    scaled.add(1, 3 * factor);
    scaled.add(2, 1 * factor);
    const double l1 = (posterior_mean(&scaled, 1.0, 3) - mle).cwiseAbs().sum();
    CHECK(l1 < prev);
    prev = l1;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("model_posterior under both priors") {
  SUBCASE("uniform prior with equal evidences is uniform") {
    const std::vector<double> evidences(5, -1234.0);
    const ModelPosterior post = model_posterior(evidences, ModelPrior::kUniform, 10);
    for (const double p : post.posterior) CHECK(p == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(post.selected == 0);  // ties break toward the smallest order
  }
  SUBCASE("exponential penalty for |S| = 2") {
    // |S_0| = 1, |S_1| = 2: prior mass (e^-1, e^-2) normalized.
    const std::vector<double> evidences(2, -50.0);
    const ModelPosterior post = model_posterior(evidences, ModelPrior::kExponentialPenalty, 2);
    const double z = std::exp(-1.0) + std::exp(-2.0);
    CHECK(post.posterior[0] == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-12));
    CHECK(post.posterior[1] == doctest::Approx(std::exp(-2.0) / z).epsilon(1e-12));
    CHECK(post.posterior[0] == doctest::Approx(0.731).epsilon(1e-3));
  }
  SUBCASE("posterior sums to 1 across huge evidence spreads") {
    Rng rng(2026);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> evidences(6);
      for (auto& e : evidences) e = -1e4 * rng.uniform() - 10.0;
      for (const ModelPrior prior : {ModelPrior::kUniform, ModelPrior::kExponentialPenalty}) {
        const ModelPosterior post = model_posterior(evidences, prior, 5);
        double sum = 0.0;
        for (const double p : post.posterior) {
          CHECK(p >= 0.0);
          sum += p;
        }
        CHECK(std::fabs(sum - 1.0) < 1e-9);
      }
    }
  }
  SUBCASE("penalty never selects a larger order than the uniform prior") {
    Rng rng(31415);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> evidences(6);
      for (auto& e : evidences) e = -2000.0 * rng.uniform();
      const int uniform_pick = model_posterior(evidences, ModelPrior::kUniform, 4).selected;
      const int penalty_pick =
          model_posterior(evidences, ModelPrior::kExponentialPenalty, 4).selected;
      CHECK(penalty_pick <= uniform_pick);
    }
  }
  SUBCASE("overflowing penalties saturate to zero mass") {
    const std::vector<double> evidences(4, -10.0);
    const ModelPosterior post = model_posterior(evidences, ModelPrior::kExponentialPenalty, 1000000);
    CHECK(post.selected == 0);
    CHECK(post.posterior[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < post.posterior.size(); ++k) CHECK(post.posterior[k] == 0.0);
  }
  CHECK_THROWS_AS(model_posterior(std::vector<double>{-1.0}, ModelPrior::kUniform, 3),
                  std::invalid_argument);
}

TEST_CASE("fit_posterior_mean smooths every row and defaults to uniform") {
  const GeneratedCorpus gen = generate_markov_corpus(1, 0.5, 4, 40, 5.0, 63);
  const ContextCounts counts = count_transitions(gen.corpus, 2);
  const MarkovModel model = fit_posterior_mean(counts, 1.0);
  CHECK(model.alpha == 1.0);
  for (const auto& [context, row] : model.rows) {
    CHECK(std::fabs(row.sum() - 1.0) < 1e-9);
    CHECK((row.array() > 0.0).all());
  }
  const StateId unseen[] = {3, 3};
  if (counts.find_row(ContextKey(unseen)) == nullptr) {
    const Eigen::VectorXd& fallback = model.row(ContextKey(unseen));
    CHECK(fallback[0] == doctest::Approx(1.0 / gen.corpus.n_states()));
  }
}

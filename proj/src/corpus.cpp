#include "markov/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "markov/random.hpp"

namespace markov {

StateVocabulary::StateVocabulary(std::string reset_label) {
  labels_.push_back(std::move(reset_label));
  index_.emplace(labels_[0], kResetState);
}

StateId StateVocabulary::intern(std::string_view label) {
  if (label == labels_[0])
    throw InputError("reserved state label '" + labels_[0] + "' found in input");
  auto it = index_.find(std::string(label));
  if (it != index_.end()) return it->second;
  const StateId id = static_cast<StateId>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<StateId> StateVocabulary::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& StateVocabulary::label(StateId id) const {
  if (id >= labels_.size()) throw std::invalid_argument("StateVocabulary::label: bad id");
  return labels_[id];
}

bool operator==(const StateVocabulary& a, const StateVocabulary& b) {
  return a.labels_ == b.labels_;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line, char delimiter) {
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t end = line.find(delimiter, start);
    const std::string_view tok =
        line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!tok.empty()) tokens.push_back(tok);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return tokens;
}

}  // namespace

LoadResult load_corpus(std::istream& in, const LoadOptions& options) {
  if (options.min_path_length < 1)
    throw std::invalid_argument("load_corpus: min_path_length must be >= 1");
  LoadResult result;
  result.corpus.vocabulary = StateVocabulary(options.reset_label);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tokens = split_tokens(line, options.delimiter);
    if (tokens.empty()) continue;
    for (const auto tok : tokens) {
      if (tok == options.reset_label)
        throw InputError("reserved state label '" + options.reset_label + "' found in input");
    }
    if (tokens.size() < options.min_path_length) {
      ++result.n_dropped_short;
      continue;
    }
    std::vector<StateId> path;
    path.reserve(tokens.size());
    for (const auto tok : tokens) path.push_back(result.corpus.vocabulary.intern(tok));
    result.corpus.n_clicks += path.size();
    result.corpus.paths.push_back(std::move(path));
  }
  if (result.corpus.paths.empty()) throw InputError("corpus is empty after filtering");
  return result;
}

LoadResult load_corpus_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file: " + path);
  return load_corpus(in, options);
}

void save_corpus(const PathCorpus& corpus, std::ostream& out, char delimiter) {
  for (const auto& path : corpus.paths) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i > 0) out << delimiter;
      out << corpus.vocabulary.label(path[i]);
    }
    out << '\n';
  }
}

void save_corpus_file(const PathCorpus& corpus, const std::string& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write corpus file: " + path);
  save_corpus(corpus, out, delimiter);
}

PreparedSequence prepare_sequences(const PathCorpus& corpus, int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("prepare_sequences: order out of range");
  PreparedSequence seq;
  seq.order = order;
  seq.pairs.reserve(corpus.n_clicks + corpus.n_paths());
  for_each_prepared_pair(corpus, order, [&seq](const ContextKey& context, StateId next) {
    seq.pairs.push_back({context, next});
  });
  return seq;
}

namespace {

StateVocabulary synthetic_vocabulary(int n_states) {
  StateVocabulary vocab;
  for (int i = 1; i <= n_states; ++i) vocab.intern("s" + std::to_string(i));
  return vocab;
}

StateId draw_from_row(const Eigen::VectorXd& row, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  const int n = static_cast<int>(row.size());
  for (int i = 0; i + 1 < n; ++i) {
    cum += row[i];
    if (u < cum) return static_cast<StateId>(i);
  }
  return static_cast<StateId>(n - 1);
}

void validate_row(const Eigen::VectorXd& row, int n_states) {
  if (row.size() != n_states + 1)
    throw InputError("transition tensor row has wrong dimension");
  if ((row.array() < 0.0).any())
    throw InputError("transition tensor row has a negative entry");
  if (std::fabs(row.sum() - 1.0) > 1e-9)
    throw InputError("transition tensor row does not sum to 1");
}

}  // namespace

PathCorpus generate_uniform_corpus(int n_states, std::uint64_t total_clicks, std::uint64_t seed) {
  if (n_states < 2) throw std::invalid_argument("generate_uniform_corpus: need >= 2 states");
  PathCorpus corpus;
  corpus.vocabulary = synthetic_vocabulary(n_states);
  Rng rng(seed);
  std::vector<StateId> current;
  while (corpus.n_clicks < total_clicks) {
    const std::uint64_t draw = rng.below(static_cast<std::uint64_t>(n_states) + 1);
    if (draw == static_cast<std::uint64_t>(n_states)) {
      if (!current.empty()) corpus.paths.push_back(std::exchange(current, {}));
      continue;
    }
    current.push_back(static_cast<StateId>(draw) + 1);
    ++corpus.n_clicks;
  }
  if (!current.empty()) corpus.paths.push_back(std::move(current));
  return corpus;
}

GeneratedCorpus generate_markov_corpus(int order, double row_concentration, int n_states,
                                       std::uint64_t n_paths, double mean_path_length,
                                       std::uint64_t seed) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("generate_markov_corpus: order out of range");
  if (!(row_concentration > 0.0))
    throw std::invalid_argument("generate_markov_corpus: concentration must be > 0");
  if (n_states < 2) throw std::invalid_argument("generate_markov_corpus: need >= 2 states");
  if (!(mean_path_length >= 1.0))
    throw std::invalid_argument("generate_markov_corpus: mean_path_length must be >= 1");

  GeneratedCorpus gen;
  gen.order = order;
  gen.corpus.vocabulary = synthetic_vocabulary(n_states);
  Rng rng(seed);
  const double hazard = 1.0 / mean_path_length;

  // Rows are drawn on first use; encounter order is deterministic per seed.
  // A context that still holds only boundary ids (a fresh path) gets no
  // termination mass, so a path always emits at least one state for k >= 1.
  auto row_for = [&](const ContextKey& context) -> const Eigen::VectorXd& {
    auto it = gen.true_rows.find(context);
    if (it != gen.true_rows.end()) return it->second;
    Eigen::VectorXd row(n_states + 1);
    const bool fresh = context.size() > 0 && context.all_equal_to(kResetState);
    const double stop = fresh ? 0.0 : hazard;
    row[0] = stop;
    row.tail(n_states) = (1.0 - stop) * rng.dirichlet(row_concentration, n_states);
    return gen.true_rows.emplace(context, std::move(row)).first->second;
  };

  for (std::uint64_t p = 0; p < n_paths; ++p) {
    std::vector<StateId> path;
    ContextKey context = ContextKey::all_reset(order);
    for (;;) {
      const Eigen::VectorXd& row = row_for(context);
      const StateId next = draw_from_row(row, rng);
      if (next == kResetState) {
        if (path.empty()) {
          // Only possible at k = 0; a new path just begins.
          if (row.tail(n_states).sum() <= 0.0)
            throw std::invalid_argument("generate_markov_corpus: mean_path_length leaves no state mass");
          continue;
        }
        break;
      }
      path.push_back(next);
      context = context.shifted(next);
    }
    gen.corpus.n_clicks += path.size();
    gen.corpus.paths.push_back(std::move(path));
  }
  return gen;
}

GeneratedCorpus generate_markov_corpus(int order, const TransitionTensor& rows, int n_states,
                                       std::uint64_t n_paths, std::uint64_t seed) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("generate_markov_corpus: order out of range");
  if (n_states < 1) throw std::invalid_argument("generate_markov_corpus: need >= 1 state");
  for (const auto& [context, row] : rows) validate_row(row, n_states);

  GeneratedCorpus gen;
  gen.order = order;
  gen.corpus.vocabulary = synthetic_vocabulary(n_states);
  gen.true_rows = rows;
  Rng rng(seed);
  constexpr std::uint64_t kMaxPathLength = 10'000'000;

  for (std::uint64_t p = 0; p < n_paths; ++p) {
    std::vector<StateId> path;
    ContextKey context = ContextKey::all_reset(order);
    for (;;) {
      auto it = gen.true_rows.find(context);
      if (it == gen.true_rows.end())
        throw InputError("transition tensor is missing a row for a reachable context");
      const StateId next = draw_from_row(it->second, rng);
      if (next == kResetState) {
        if (path.empty()) {
          if (it->second.tail(n_states).sum() <= 0.0)
            throw InputError("transition tensor terminates paths before any state is emitted");
          continue;
        }
        break;
      }
      path.push_back(next);
      context = context.shifted(next);
      if (path.size() > kMaxPathLength)
        throw InputError("transition tensor generated a path longer than 1e7 states");
    }
    gen.corpus.n_clicks += path.size();
    gen.corpus.paths.push_back(std::move(path));
  }
  return gen;
}

}  // namespace markov

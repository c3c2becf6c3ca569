#include "markov/structure.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace markov {

Eigen::MatrixXd global_heatmap(const ContextCounts& counts) {
  if (counts.order() != 1) throw std::invalid_argument("global_heatmap: counts must be order 1");
  const int s = counts.n_states();
  Eigen::MatrixXd heatmap = Eigen::MatrixXd::Zero(s, s);
  const double total = static_cast<double>(counts.total());
  for (const auto& [context, row] : counts.rows()) {
    const int from = static_cast<int>(context[0]);
    for (const auto& [state, count] : row.cells)
      heatmap(from, static_cast<int>(state)) = static_cast<double>(count) / total;
  }
  return heatmap;
}

namespace {

bool context_matches_anchor(const ContextKey& context, std::span<const StateId> anchor) {
  for (std::size_t i = 0; i < anchor.size(); ++i) {
    if (context[static_cast<int>(i)] != anchor[i]) return false;
  }
  return true;
}

}  // namespace

LocalGraph local_graph(const ContextCounts& counts, const StateVocabulary& vocabulary,
                       const LocalGraphOptions& options) {
  if (counts.order() < 1) throw std::invalid_argument("local_graph: counts must be order >= 1");
  if (static_cast<int>(options.anchor.size()) > counts.order())
    throw std::invalid_argument("local_graph: anchor is longer than the order");
  if (options.top_nodes < 1 || options.top_edges < 1)
    throw std::invalid_argument("local_graph: top_nodes and top_edges must be >= 1");

  // Candidate nodes are observed contexts that continue the anchor and end in
  // a real (non-boundary) state.
  std::vector<const ContextKey*> candidates;
  for (const auto& [context, row] : counts.rows()) {
    if (!context_matches_anchor(context, options.anchor)) continue;
    if (context[context.size() - 1] == kResetState) continue;
    candidates.push_back(&context);
  }
  LocalGraph graph;
  if (candidates.empty()) {
    graph.anchor_observed = false;
    return graph;
  }

  std::vector<double> centrality(candidates.size(), 0.0);
  if (options.centrality == Centrality::kOutgoing) {
    // Share of all transitions in the dataset that leave this context.
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      centrality[i] = static_cast<double>(counts.find_row(*candidates[i])->total) /
                      static_cast<double>(counts.total());
    }
  } else {
    // Sum of MLE probabilities into the node's state from the other
    // candidate contexts.
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const StateId target = (*candidates[i])[candidates[i]->size() - 1];
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (j == i) continue;
        const CountRow& row = *counts.find_row(*candidates[j]);
        centrality[i] += static_cast<double>(row.count(target)) / static_cast<double>(row.total);
      }
    }
  }

  std::vector<std::size_t> by_rank(candidates.size());
  for (std::size_t i = 0; i < by_rank.size(); ++i) by_rank[i] = i;
  std::sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
    if (centrality[a] != centrality[b]) return centrality[a] > centrality[b];
    return *candidates[a] < *candidates[b];
  });
  const std::size_t n_nodes =
      std::min<std::size_t>(static_cast<std::size_t>(options.top_nodes), by_rank.size());

  std::vector<StateId> displayed_states;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const ContextKey& context = *candidates[by_rank[i]];
    const StateId state = context[context.size() - 1];
    displayed_states.push_back(state);
    graph.nodes.push_back({vocabulary.label(state), centrality[by_rank[i]]});
  }

  for (std::size_t i = 0; i < n_nodes; ++i) {
    const ContextKey& context = *candidates[by_rank[i]];
    const CountRow& row = *counts.find_row(context);
    std::vector<std::pair<StateId, double>> out;
    for (const auto& [state, count] : row.cells) {
      const bool shown = state == kResetState ||
                         std::find(displayed_states.begin(), displayed_states.end(), state) !=
                             displayed_states.end();
      if (!shown) continue;
      out.emplace_back(state, static_cast<double>(count) / static_cast<double>(row.total));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    const std::size_t n_edges =
        std::min<std::size_t>(static_cast<std::size_t>(options.top_edges), out.size());
    const std::string src = vocabulary.label(context[context.size() - 1]);
    for (std::size_t e = 0; e < n_edges; ++e)
      graph.edges.push_back({src, vocabulary.label(out[e].first), out[e].second});
  }
  return graph;
}

SelfTransitionProfile self_transition_profile(const PathCorpus& corpus, int max_order,
                                              int top_states) {
  if (max_order < 1) throw std::invalid_argument("self_transition_profile: max_order must be >= 1");
  if (top_states < 1) throw std::invalid_argument("self_transition_profile: top_states must be >= 1");

  const ContextCounts order1 = count_transitions(corpus, 1);
  std::vector<std::pair<StateId, std::uint64_t>> mass;  // outgoing transition mass per state
  for (const auto& [context, row] : order1.rows()) {
    if (context[0] == kResetState) continue;
    mass.emplace_back(context[0], row.total);
  }
  std::sort(mass.begin(), mass.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  SelfTransitionProfile profile;
  const std::size_t n_report = std::min<std::size_t>(static_cast<std::size_t>(top_states), mass.size());
  for (std::size_t i = 0; i < n_report; ++i) profile.states.push_back(mass[i].first);

  for (int k = 1; k <= max_order; ++k) {
    const ContextCounts counts = count_transitions(corpus, k);
    for (const StateId state : profile.states) {
      SelfProfilePoint point;
      point.state = state;
      point.order = k;
      std::vector<StateId> repeated(static_cast<std::size_t>(k), state);
      const CountRow* row = counts.find_row(ContextKey(repeated));
      if (row != nullptr) {
        point.observed = true;
        point.stay = static_cast<double>(row->count(state)) / static_cast<double>(row->total);
        point.switch_away = 1.0 - point.stay;
      }
      profile.points.push_back(point);
    }
  }
  return profile;
}

std::pair<PathCorpus, PathCorpus> split_by_endpoints(const PathCorpus& corpus) {
  PathCorpus same;
  PathCorpus different;
  same.vocabulary = corpus.vocabulary;
  different.vocabulary = corpus.vocabulary;
  for (const auto& path : corpus.paths) {
    PathCorpus& side = (path.front() == path.back()) ? same : different;
    side.n_clicks += path.size();
    side.paths.push_back(path);
  }
  return {std::move(same), std::move(different)};
}

void write_heatmap_csv(const Eigen::MatrixXd& heatmap, const StateVocabulary& vocabulary,
                       std::ostream& out) {
  if (heatmap.rows() != vocabulary.size() || heatmap.cols() != vocabulary.size())
    throw std::invalid_argument("write_heatmap_csv: matrix does not match vocabulary");
  for (int j = 0; j < heatmap.cols(); ++j) out << ',' << vocabulary.label(static_cast<StateId>(j));
  out << '\n';
  for (int i = 0; i < heatmap.rows(); ++i) {
    out << vocabulary.label(static_cast<StateId>(i));
    for (int j = 0; j < heatmap.cols(); ++j) out << ',' << heatmap(i, j);
    out << '\n';
  }
}

void write_graph_json(const LocalGraph& graph, std::ostream& out) {
  nlohmann::json j;
  j["anchor_observed"] = graph.anchor_observed;
  j["nodes"] = nlohmann::json::array();
  for (const auto& node : graph.nodes)
    j["nodes"].push_back({{"label", node.label}, {"size", node.size}});
  j["edges"] = nlohmann::json::array();
  for (const auto& edge : graph.edges)
    j["edges"].push_back({{"src", edge.src}, {"dst", edge.dst}, {"weight", edge.weight}});
  out << j.dump(2) << '\n';
}

void write_profile_csv(const SelfTransitionProfile& profile, const StateVocabulary& vocabulary,
                       std::ostream& out) {
  out << "state,k,stay,switch\n";
  for (const auto& point : profile.points) {
    if (!point.observed) continue;
    out << vocabulary.label(point.state) << ',' << point.order << ',' << point.stay << ','
        << point.switch_away << '\n';
  }
}

}  // namespace markov

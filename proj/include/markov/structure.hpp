#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "markov/corpus.hpp"
#include "markov/counts.hpp"

namespace markov {

// Order-1 transition mass normalized by the total number of transitions in
// the dataset (not per row). Includes the boundary row and column; all cells
// sum to 1.
Eigen::MatrixXd global_heatmap(const ContextCounts& counts);

// Node ranking convention for local transition graphs.
enum class Centrality {
  kIncoming,  // sum of maximum-likelihood transition probabilities from the other candidate nodes
  kOutgoing,  // the node's share of all observed transitions in the dataset
};

struct LocalGraph {
  struct Node {
    std::string label;
    double size = 0.0;
  };
  struct Edge {
    std::string src;
    std::string dst;
    double weight = 0.0;  // exact maximum-likelihood probability
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  bool anchor_observed = true;
};

struct LocalGraphOptions {
  int top_nodes = 4;
  int top_edges = 4;
  Centrality centrality = Centrality::kIncoming;
  // For order k >= 2: the fixed oldest part of the context; candidate nodes
  // are the continuations of this prefix. At most `order` entries long.
  std::vector<StateId> anchor;
};

// Picks the top nodes by centrality among the non-boundary states (filtered
// to continuations of the anchor when given) and emits each node's strongest
// outgoing transitions. Edges are kept only when they point at a displayed
// node or at the boundary state, so termination stays visible. An unobserved
// anchor yields an empty graph with anchor_observed = false.
LocalGraph local_graph(const ContextCounts& counts, const StateVocabulary& vocabulary,
                       const LocalGraphOptions& options = {});

// P(stay in the same state after k consecutive visits) per state and order,
// from maximum-likelihood counts; switch is the exact complement.
struct SelfProfilePoint {
  StateId state = 0;
  int order = 0;
  double stay = 0.0;
  double switch_away = 0.0;
  bool observed = false;  // false when the repeated context never occurs
};

struct SelfTransitionProfile {
  std::vector<StateId> states;  // reported states, highest transition mass first
  std::vector<SelfProfilePoint> points;
};

SelfTransitionProfile self_transition_profile(const PathCorpus& corpus, int max_order,
                                              int top_states = 3);

// Partitions paths by whether they end in the state they started from. Both
// halves share the parent vocabulary.
std::pair<PathCorpus, PathCorpus> split_by_endpoints(const PathCorpus& corpus);

// Plot-ready exports. The heatmap carries a label header row and column; the
// profile is "state,k,stay,switch"; the graph is JSON
// {nodes:[{label,size}], edges:[{src,dst,weight}]}.
void write_heatmap_csv(const Eigen::MatrixXd& heatmap, const StateVocabulary& vocabulary,
                       std::ostream& out);
void write_graph_json(const LocalGraph& graph, std::ostream& out);
void write_profile_csv(const SelfTransitionProfile& profile, const StateVocabulary& vocabulary,
                       std::ostream& out);

}  // namespace markov

// pathmarkov: fit Markov chain models of varying order to path corpora,
// select the appropriate order, inspect transition structure, and generate
// synthetic corpora with known ground truth.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "markov/bayes.hpp"
#include "markov/corpus.hpp"
#include "markov/counts.hpp"
#include "markov/crossval.hpp"
#include "markov/report.hpp"
#include "markov/structure.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternalError = 1;
constexpr int kExitInputError = 2;

char parse_delimiter(const std::string& text) {
  if (text == "tab" || text == "\\t") return '\t';
  if (text == "space") return ' ';
  if (text.size() == 1) return text[0];
  throw markov::InputError("delimiter must be a single character, 'tab', or 'space'");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw markov::InputError("cannot write file: " + path);
  return out;
}

struct CorpusArgs {
  std::string input;
  std::string delimiter = "tab";
  std::size_t min_path_length = 2;

  void attach(CLI::App& cmd) {
    cmd.add_option("--input", input, "corpus file, one path per line")->required();
    cmd.add_option("--delimiter", delimiter, "token delimiter: single char, 'tab', or 'space'");
    cmd.add_option("--min-path-length", min_path_length, "drop shorter paths")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  }

  markov::PathCorpus load(std::uint64_t* dropped = nullptr) const {
    markov::LoadOptions options;
    options.delimiter = parse_delimiter(delimiter);
    options.min_path_length = min_path_length;
    markov::LoadResult result = markov::load_corpus_file(input, options);
    if (result.n_dropped_short > 0)
      std::cerr << "note: dropped " << result.n_dropped_short << " path(s) shorter than "
                << min_path_length << "\n";
    if (dropped != nullptr) *dropped = result.n_dropped_short;
    return std::move(result.corpus);
  }
};

int cmd_select(const CorpusArgs& corpus_args, const markov::SelectionOptions& options,
               const std::string& out_path, const std::string& format, bool timestamp) {
  const markov::PathCorpus corpus = corpus_args.load();
  const markov::SelectionReport report = markov::run_selection(corpus, options);
  if (format == "csv") {
    markov::write_report_csv(report, out_path);
  } else {
    std::string text = markov::report_to_json(report, /*pretty=*/true);
    if (timestamp) {
      nlohmann::json j = nlohmann::json::parse(text);
      const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buffer[32];
      std::strftime(buffer, sizeof buffer, "%FT%TZ", std::gmtime(&now));
      j["generated_at"] = buffer;
      text = j.dump(2) + "\n";
    }
    open_output(out_path) << text;
  }
  std::cout << "selected orders: aic=" << report.selected_aic << " bic=" << report.selected_bic
            << " bayes_uniform=" << report.selected_bayes_uniform
            << " bayes_penalty=" << report.selected_bayes_penalty << " cv=" << report.selected_cv
            << "\nrecommended order: " << report.recommended_order << "\n";
  return kExitOk;
}

void write_truth_sidecar(const markov::GeneratedCorpus& generated, const nlohmann::json& params,
                         const std::string& corpus_path) {
  nlohmann::json truth;
  truth["generator"] = params;
  truth["order"] = generated.order;
  nlohmann::json rows = nlohmann::json::object();
  for (const auto& [context, row] : generated.true_rows) {
    std::string key;
    for (int i = 0; i < context.size(); ++i) {
      if (i > 0) key += '|';
      key += generated.corpus.vocabulary.label(context[i]);
    }
    std::vector<double> values(row.data(), row.data() + row.size());
    rows[key] = values;
  }
  truth["rows"] = rows;
  open_output(corpus_path + ".truth.json") << truth.dump(2) << "\n";
}

int cmd_generate_uniform(int states, std::uint64_t clicks, std::uint64_t seed,
                         const std::string& out_path, const std::string& delimiter) {
  const markov::PathCorpus corpus = markov::generate_uniform_corpus(states, clicks, seed);
  markov::save_corpus_file(corpus, out_path, parse_delimiter(delimiter));
  nlohmann::json params = {{"kind", "uniform"}, {"states", states}, {"clicks", clicks}, {"seed", seed}};
  open_output(out_path + ".truth.json") << params.dump(2) << "\n";
  std::cout << "wrote " << corpus.n_paths() << " paths, " << corpus.n_clicks << " clicks to "
            << out_path << "\n";
  return kExitOk;
}

int cmd_generate_markov(int order, int states, double concentration, std::uint64_t clicks,
                        double mean_length, std::uint64_t seed, const std::string& out_path,
                        const std::string& delimiter) {
  const std::uint64_t n_paths =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(
                                     std::llround(static_cast<double>(clicks) / mean_length)));
  const markov::GeneratedCorpus generated =
      markov::generate_markov_corpus(order, concentration, states, n_paths, mean_length, seed);
  markov::save_corpus_file(generated.corpus, out_path, parse_delimiter(delimiter));
  nlohmann::json params = {{"kind", "markov"},       {"order", order},
                           {"states", states},       {"concentration", concentration},
                           {"clicks", clicks},       {"mean_path_length", mean_length},
                           {"n_paths", n_paths},     {"seed", seed}};
  write_truth_sidecar(generated, params, out_path);
  std::cout << "wrote " << generated.corpus.n_paths() << " paths, " << generated.corpus.n_clicks
            << " clicks to " << out_path << "\n";
  return kExitOk;
}

struct StructureArgs {
  std::string heatmap_path;
  std::string graph_path;
  std::string profile_path;
  std::string split_prefix;
  int order = 1;
  int top_nodes = 4;
  int top_edges = 4;
  int max_order = 5;
  int top_states = 3;
  std::string centrality = "incoming";
  std::string anchor_text;
};

int cmd_structure(const CorpusArgs& corpus_args, const StructureArgs& args) {
  const markov::PathCorpus corpus = corpus_args.load();
  bool did_anything = false;

  if (!args.heatmap_path.empty()) {
    const auto counts = markov::count_transitions(corpus, 1);
    auto out = open_output(args.heatmap_path);
    markov::write_heatmap_csv(markov::global_heatmap(counts), corpus.vocabulary, out);
    did_anything = true;
  }
  if (!args.graph_path.empty()) {
    markov::LocalGraphOptions options;
    options.top_nodes = args.top_nodes;
    options.top_edges = args.top_edges;
    options.centrality = args.centrality == "outgoing" ? markov::Centrality::kOutgoing
                                                       : markov::Centrality::kIncoming;
    if (!args.anchor_text.empty()) {
      std::stringstream anchor_stream(args.anchor_text);
      std::string label;
      while (std::getline(anchor_stream, label, ',')) {
        const auto id = corpus.vocabulary.find(label);
        if (!id) throw markov::InputError("anchor label not in vocabulary: " + label);
        options.anchor.push_back(*id);
      }
    }
    const auto counts = markov::count_transitions(corpus, args.order);
    const auto graph = markov::local_graph(counts, corpus.vocabulary, options);
    if (!graph.anchor_observed) std::cerr << "note: anchor context never observed\n";
    auto out = open_output(args.graph_path);
    markov::write_graph_json(graph, out);
    did_anything = true;
  }
  if (!args.profile_path.empty()) {
    const auto profile =
        markov::self_transition_profile(corpus, args.max_order, args.top_states);
    auto out = open_output(args.profile_path);
    markov::write_profile_csv(profile, corpus.vocabulary, out);
    did_anything = true;
  }
  if (!args.split_prefix.empty()) {
    const auto [same, different] = markov::split_by_endpoints(corpus);
    for (const auto& [side, name] :
         {std::pair{&same, "same"}, std::pair{&different, "different"}}) {
      if (side->paths.empty()) {
        std::cerr << "note: endpoint split '" << name << "' is empty\n";
        continue;
      }
      const auto counts = markov::count_transitions(*side, 1);
      auto out = open_output(args.split_prefix + name + ".csv");
      markov::write_heatmap_csv(markov::global_heatmap(counts), corpus.vocabulary, out);
    }
    did_anything = true;
  }
  if (!did_anything)
    throw markov::InputError(
        "structure: nothing to do (use --heatmap, --graph, --self-profile, or --split-endpoints)");
  return kExitOk;
}

int cmd_counts(const CorpusArgs& corpus_args, int order, const std::string& out_path) {
  const markov::PathCorpus corpus = corpus_args.load();
  const auto counts = markov::count_transitions(corpus, order);
  auto out = open_output(out_path);
  markov::write_counts_csv(counts, corpus.vocabulary, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov chain order selection and structure analysis for path corpora"};
  app.require_subcommand(1);

  // select
  auto* select = app.add_subcommand("select", "run all order-selection methods");
  CorpusArgs select_corpus;
  select_corpus.attach(*select);
  markov::SelectionOptions selection;
  std::string select_out = "report.json";
  std::string select_format = "json";
  bool timestamp = false;
  select->add_option("--max-order", selection.k_max, "highest order to fit")
      ->check(CLI::Range(1, markov::kMaxOrder));
  select->add_option("--alpha", selection.alpha, "Dirichlet hyperparameter")
      ->check(CLI::PositiveNumber);
  select->add_option("--folds", selection.n_folds, "cross-validation folds")
      ->check(CLI::Range(2, 1000));
  select->add_option("--seed", selection.seed, "top-level seed");
  select->add_option("--threads", selection.threads, "worker threads (0 = all cores)");
  select->add_option("--out", select_out, "output path (csv: prefix for panel files)");
  select->add_option("--format", select_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  select->add_flag("--timestamp", timestamp, "embed a generation timestamp in the JSON report");
  select->add_flag_callback(
      "--df-exclude-reset", [&] { selection.df_include_reset = false; },
      "exclude the boundary state from |S| in degrees of freedom");
  select->add_flag_callback(
      "--bic-clicks-only", [&] { selection.bic_count_reset_targets = false; },
      "use clicks (not clicks + terminations) as the BIC observation count");
  select->add_flag_callback(
      "--cv-skip-reset", [&] { selection.cv_rank_reset_targets = false; },
      "do not rank transitions into the boundary state in cross-validation");

  // generate
  auto* generate = app.add_subcommand("generate", "write a synthetic corpus plus ground truth");
  generate->require_subcommand(1);
  auto* uniform = generate->add_subcommand("uniform", "memoryless uniform process");
  int uniform_states = 26;
  std::uint64_t uniform_clicks = 100000;
  std::uint64_t uniform_seed = 1;
  std::string uniform_out = "corpus.tsv";
  std::string uniform_delim = "tab";
  uniform->add_option("--states", uniform_states)->check(CLI::Range(2, 1000000));
  uniform->add_option("--clicks", uniform_clicks)->check(CLI::PositiveNumber);
  uniform->add_option("--seed", uniform_seed);
  uniform->add_option("--out", uniform_out);
  uniform->add_option("--delimiter", uniform_delim);

  auto* markov_gen = generate->add_subcommand("markov", "true order-k chain with Dirichlet rows");
  int gen_order = 1;
  int gen_states = 5;
  double gen_concentration = 0.1;
  std::uint64_t gen_clicks = 100000;
  double gen_mean_length = 10.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "corpus.tsv";
  std::string gen_delim = "tab";
  markov_gen->add_option("--order", gen_order)->check(CLI::Range(0, markov::kMaxOrder));
  markov_gen->add_option("--states", gen_states)->check(CLI::Range(2, 1000000));
  markov_gen->add_option("--concentration", gen_concentration)->check(CLI::PositiveNumber);
  markov_gen->add_option("--clicks", gen_clicks)->check(CLI::PositiveNumber);
  markov_gen->add_option("--mean-length", gen_mean_length)->check(CLI::Range(1.0, 1e6));
  markov_gen->add_option("--seed", gen_seed);
  markov_gen->add_option("--out", gen_out);
  markov_gen->add_option("--delimiter", gen_delim);

  // structure
  auto* structure = app.add_subcommand("structure", "transition-structure reports");
  CorpusArgs structure_corpus;
  structure_corpus.attach(*structure);
  StructureArgs structure_args;
  structure->add_option("--heatmap", structure_args.heatmap_path,
                        "write the globally normalized order-1 heatmap CSV");
  structure->add_option("--graph", structure_args.graph_path, "write a local transition graph JSON");
  structure->add_option("--self-profile", structure_args.profile_path,
                        "write stay-vs-switch profiles CSV");
  structure->add_option("--split-endpoints", structure_args.split_prefix,
                        "write heatmaps for same/different endpoint paths (prefix)");
  structure->add_option("--order", structure_args.order, "graph order")
      ->check(CLI::Range(1, markov::kMaxOrder));
  structure->add_option("--top-nodes", structure_args.top_nodes)->check(CLI::Range(1, 10000));
  structure->add_option("--top-edges", structure_args.top_edges)->check(CLI::Range(1, 10000));
  structure->add_option("--centrality", structure_args.centrality)
      ->check(CLI::IsMember({"incoming", "outgoing"}));
  structure->add_option("--anchor", structure_args.anchor_text,
                        "comma-separated labels fixing the oldest context entries");
  structure->add_option("--max-order", structure_args.max_order, "profile depth")
      ->check(CLI::Range(1, markov::kMaxOrder));
  structure->add_option("--top", structure_args.top_states, "profiled states")
      ->check(CLI::Range(1, 10000));

  // counts
  auto* counts_cmd = app.add_subcommand("counts", "dump sparse transition counts as CSV");
  CorpusArgs counts_corpus;
  counts_corpus.attach(*counts_cmd);
  int counts_order = 1;
  std::string counts_out = "counts.csv";
  counts_cmd->add_option("--order", counts_order)->check(CLI::Range(0, markov::kMaxOrder));
  counts_cmd->add_option("--out", counts_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (select->parsed())
      return cmd_select(select_corpus, selection, select_out, select_format, timestamp);
    if (uniform->parsed())
      return cmd_generate_uniform(uniform_states, uniform_clicks, uniform_seed, uniform_out,
                                  uniform_delim);
    if (markov_gen->parsed())
      return cmd_generate_markov(gen_order, gen_states, gen_concentration, gen_clicks,
                                 gen_mean_length, gen_seed, gen_out, gen_delim);
    if (structure->parsed()) return cmd_structure(structure_corpus, structure_args);
    if (counts_cmd->parsed()) return cmd_counts(counts_corpus, counts_order, counts_out);
  } catch (const markov::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitInternalError;
}

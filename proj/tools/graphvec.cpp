// graphvec command-line tool: vocabulary building, training, inference and
// downstream evaluation of whole-graph embeddings.
//
// Machine-readable results go to stdout as JSON; logs go to stderr and are
// filtered by the GRAPHVEC_LOG environment variable (trace..off).

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "graphvec/graphvec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFormat = 2,
  kVocabulary = 3,
  kNumerical = 4,
  kVersion = 5,
  kOther = 6,
};

struct DatasetArgs {
  std::string input;
  std::string format = "tu";
  std::string name;  // TU only; defaults to the directory name
};

graphvec::GraphCorpus load_corpus(const DatasetArgs& args) {
  if (args.format == "jsonl") return graphvec::parse_jsonl_dataset(args.input);
  fs::path dir(args.input);
  std::string name = args.name;
  if (name.empty()) {
    name = (dir.has_filename() ? dir : dir.parent_path()).filename().string();
  }
  return graphvec::parse_tu_dataset(dir, name);
}

void log_ingest(const graphvec::GraphCorpus& corpus) {
  spdlog::info("loaded {} graphs from '{}'", corpus.size(), corpus.name());
  if (corpus.stats().self_loops || corpus.stats().duplicate_edges) {
    spdlog::warn("dropped {} self-loops and {} duplicate edges", corpus.stats().self_loops,
                 corpus.stats().duplicate_edges);
  }
}

void add_dataset_options(CLI::App* cmd, DatasetArgs& args, bool required) {
  auto* in = cmd->add_option("--input", args.input, "Dataset directory (tu) or file (jsonl)");
  if (required) in->required();
  cmd->add_option("--format", args.format, "Dataset format")->check(CLI::IsMember({"tu", "jsonl"}));
  cmd->add_option("--name", args.name, "TU dataset name (file prefix); defaults to the directory name");
}

void add_train_options(CLI::App* cmd, graphvec::TrainConfig& c) {
  cmd->add_option("--wl-degree", c.max_degree, "Largest rooted-subgraph degree D")->check(CLI::NonNegativeNumber);
  cmd->add_option("--min-count", c.min_count, "Drop tokens seen fewer times")->check(CLI::PositiveNumber);
  cmd->add_option("--dimensions", c.dimensions, "Embedding size")->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", c.epochs, "Training epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--lr", c.learning_rate, "Initial learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--negative", c.negative_samples, "Negative samples per pair")->check(CLI::PositiveNumber);
  cmd->add_option("--ns-exponent", c.ns_exponent, "Frequency exponent of the negative distribution (0 = uniform)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", c.seed, "Seed for all randomness");
  cmd->add_option("--workers", c.workers, "Training threads (1 = deterministic)")->check(CLI::PositiveNumber);
  cmd->add_flag("--exclude-document-negatives", c.exclude_document_negatives,
                "Reject negatives present anywhere in the graph's document");
  cmd->add_flag("--shuffle-tokens", c.shuffle_tokens, "Shuffle tokens within each document every epoch");
}

/// Embeddings from a text file (--embeddings) or a binary model (--model).
graphvec::Matrix load_embeddings(const std::string& embeddings_path, const std::string& model_path) {
  if (!model_path.empty()) {
    std::ifstream in(model_path, std::ios::binary);
    if (!in) throw graphvec::FormatError("cannot open model " + model_path);
    return graphvec::load_model(in).model.graph_vectors;
  }
  if (embeddings_path.empty()) throw graphvec::ArgumentError("one of --embeddings or --model is required");
  std::ifstream in(embeddings_path);
  if (!in) throw graphvec::FormatError("cannot open embeddings " + embeddings_path);
  try {
    return graphvec::read_embeddings_text(in);
  } catch (const graphvec::FormatError& e) {
    throw graphvec::VersionError(std::string("unreadable embedding file: ") + e.what());
  }
}

void require_rows(const graphvec::Matrix& m, std::size_t n_graphs) {
  if (m.rows() != n_graphs) {
    throw graphvec::VersionError("embeddings have " + std::to_string(m.rows()) + " rows but dataset has " +
                                 std::to_string(n_graphs) + " graphs");
  }
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw graphvec::Error("cannot write " + path.string());
  body(out);
}

// ---------------------------------------------------------------------------

struct VocabArgs {
  DatasetArgs data;
  int wl_degree = 3;
  std::uint64_t min_count = 1;
  bool edge_labels = false;
  std::string output;
};

int run_vocab(const VocabArgs& a) {
  const auto corpus = load_corpus(a.data);
  log_ingest(corpus);
  const auto vocab = graphvec::build_vocabulary(corpus, a.wl_degree, a.min_count, {a.edge_labels});
  spdlog::info("vocabulary: {} tokens, {} occurrences", vocab.size(), vocab.total_occurrences());
  if (a.output.empty()) {
    graphvec::write_vocabulary_tsv(vocab, std::cout);
  } else {
    write_file(a.output, [&](std::ostream& out) { graphvec::write_vocabulary_tsv(vocab, out); });
  }
  return kOk;
}

struct TrainArgs {
  DatasetArgs data;
  graphvec::TrainConfig config;
  bool edge_labels = false;
  std::string output;
  std::string model;
  std::string from_manifest;
};

void apply_manifest(TrainArgs& a, CLI::App* cmd) {
  std::ifstream in(a.from_manifest);
  if (!in) throw graphvec::FormatError("cannot open manifest " + a.from_manifest);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw graphvec::FormatError("manifest " + a.from_manifest + ": " + e.what());
  }
  a.data.input = m.at("dataset").at("input").get<std::string>();
  a.data.format = m.at("dataset").at("format").get<std::string>();
  a.data.name = m.at("dataset").value("name", std::string{});
  a.config = graphvec::train_config_from_json(m.at("config"));
  a.edge_labels = m.value("edge_labels", false);
  if (cmd->count("--output") == 0) a.output = m.at("outputs").at("embeddings").get<std::string>();
  // A new --output without --model puts the model next to it, not over the recorded one.
  if (cmd->count("--model") == 0 && cmd->count("--output") == 0) {
    a.model = m.at("outputs").at("model").get<std::string>();
  }
}

int run_train(TrainArgs a, CLI::App* cmd) {
  if (!a.from_manifest.empty()) apply_manifest(a, cmd);
  if (a.output.empty()) throw graphvec::ArgumentError("--output is required");
  if (a.data.input.empty()) throw graphvec::ArgumentError("--input is required");
  if (a.model.empty()) a.model = a.output + ".model";
  a.config.validate();

  const auto corpus = load_corpus(a.data);
  log_ingest(corpus);
  const auto vocab = graphvec::build_vocabulary(corpus, a.config.max_degree, a.config.min_count, {a.edge_labels});
  const auto docs = graphvec::corpus_to_documents(corpus, vocab, a.config.max_degree);
  spdlog::info("vocabulary: {} tokens; training {} epochs at {} dimensions", vocab.size(), a.config.epochs,
               a.config.dimensions);

  const auto model = graphvec::train(docs, vocab, a.config, [&](int epoch, const graphvec::EmbeddingModel&) {
    if ((epoch + 1) % 10 == 0) spdlog::debug("epoch {}/{}", epoch + 1, a.config.epochs);
  });

  write_file(a.output, [&](std::ostream& out) { graphvec::write_embeddings_text(model.graph_vectors, out); });
  write_file(a.model, [&](std::ostream& out) { graphvec::save_model(model, vocab, a.config, out); }, true);

  json manifest = {
      {"format_version", 1},
      {"command", "train"},
      {"dataset", {{"input", a.data.input}, {"format", a.data.format}, {"name", a.data.name}}},
      {"config", graphvec::to_json(a.config)},
      {"edge_labels", a.edge_labels},
      {"n_graphs", corpus.size()},
      {"vocabulary", {{"size", vocab.size()}, {"hash", graphvec::vocabulary_hash(corpus, vocab)}}},
      {"outputs", {{"embeddings", a.output}, {"model", a.model}}},
  };
  const std::string manifest_path = a.output + ".manifest.json";
  write_file(manifest_path, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
  std::cout << json{{"embeddings", a.output}, {"model", a.model}, {"manifest", manifest_path}}.dump() << '\n';
  return kOk;
}

struct EvalArgs {
  DatasetArgs data;
  std::string embeddings;
  std::string model;
  double train_fraction = 0.9;
  int repeats = 10;
  std::uint64_t seed = 1;
  int k = 0;
  std::size_t query = 0;
  std::size_t top_n = 10;
};

int run_classify(const EvalArgs& a) {
  const auto corpus = load_corpus(a.data);
  const auto x = load_embeddings(a.embeddings, a.model);
  require_rows(x, corpus.size());
  const auto labels = corpus.class_labels();
  const graphvec::SplitSpec split{a.train_fraction, a.repeats, a.seed};
  const auto report = graphvec::classify(x, labels, split);
  json out = {{"metric", "accuracy"},
              {"mean", report.mean},
              {"std", report.std},
              {"repeats", a.repeats},
              {"accuracies", report.accuracies},
              {"config",
               {{"train_fraction", a.train_fraction},
                {"seed", a.seed},
                {"classifier", "logistic_l2"},
                {"lambdas", report.chosen_lambdas}}}};
  std::cout << out.dump() << '\n';
  return kOk;
}

int run_cluster(const EvalArgs& a) {
  const auto corpus = load_corpus(a.data);
  const auto x = load_embeddings(a.embeddings, a.model);
  require_rows(x, corpus.size());
  std::optional<std::vector<int>> truth;
  if (corpus.has_class_labels()) truth = corpus.class_labels();
  int k = a.k;
  if (k == 0) {
    if (!truth) throw graphvec::ArgumentError("--k is required when the dataset has no class labels");
    auto classes = *truth;
    std::sort(classes.begin(), classes.end());
    k = static_cast<int>(std::unique(classes.begin(), classes.end()) - classes.begin());
  }
  std::vector<double> aris, inertias;
  for (int r = 0; r < a.repeats; ++r) {
    const auto result = graphvec::kmeans(x, k, graphvec::derive_seed(a.seed, graphvec::SeedStream::kKMeans, r));
    inertias.push_back(result.inertia);
    if (truth) aris.push_back(graphvec::adjusted_rand_index(result.assignments, *truth));
  }
  json out = {{"metric", "ari"}, {"repeats", a.repeats}, {"config", {{"k", k}, {"seed", a.seed}}},
              {"inertia", inertias}};
  if (truth) {
    double mean = 0;
    for (const double v : aris) mean += v;
    mean /= static_cast<double>(aris.size());
    out["mean"] = mean;
    out["std"] = graphvec::detail::population_std(aris, mean);
  } else {
    spdlog::warn("dataset has no class labels; ARI not computed");
    out["mean"] = nullptr;
    out["std"] = nullptr;
  }
  std::cout << out.dump() << '\n';
  return kOk;
}

int run_similar(const EvalArgs& a) {
  const auto x = load_embeddings(a.embeddings, a.model);
  const auto neighbors = graphvec::nearest_neighbors(x, a.query, a.top_n);
  json list = json::array();
  for (const auto& n : neighbors) list.push_back({{"graph_id", n.graph_id}, {"cosine", n.cosine}});
  std::cout << json{{"query", a.query}, {"top_n", a.top_n}, {"neighbors", std::move(list)}}.dump() << '\n';
  return kOk;
}

struct InferArgs {
  DatasetArgs data;
  std::string model;
  std::string output;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<std::uint64_t> seed;
};

int run_infer(const InferArgs& a) {
  std::ifstream in(a.model, std::ios::binary);
  if (!in) throw graphvec::FormatError("cannot open model " + a.model);
  const auto saved = graphvec::load_model(in);
  auto config = saved.config;
  if (a.epochs) config.epochs = *a.epochs;
  if (a.lr) config.learning_rate = *a.lr;
  if (a.seed) config.seed = *a.seed;

  const auto corpus = load_corpus(a.data);
  log_ingest(corpus);
  graphvec::WlRelabeler relabeler = saved.vocab.relabeler();
  graphvec::Matrix vectors(corpus.size(), saved.model.dimensions());
  json list = json::array();
  for (const auto& g : corpus) {
    const auto doc = graphvec::graph_to_document(g, saved.vocab, saved.vocab.max_degree(), relabeler);
    const auto v = graphvec::infer_new_graph(saved.model, doc, saved.vocab, config);
    std::copy(v.begin(), v.end(), vectors.row(g.graph_id()).begin());
    list.push_back({{"graph_id", g.graph_id()}, {"known_tokens", doc.token_ids.size()}, {"vector", v}});
  }
  if (!a.output.empty()) {
    write_file(a.output, [&](std::ostream& out) { graphvec::write_embeddings_text(vectors, out); });
  }
  std::cout << json{{"dimensions", saved.model.dimensions()}, {"graphs", std::move(list)}}.dump() << '\n';
  return kOk;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("graphvec");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("GRAPHVEC_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Whole-graph embeddings from Weisfeiler-Lehman rooted subgraphs"};
  app.require_subcommand(1);

  VocabArgs vocab_args;
  auto* vocab_cmd = app.add_subcommand("vocab", "Build the rooted-subgraph vocabulary and write it as TSV");
  add_dataset_options(vocab_cmd, vocab_args.data, true);
  vocab_cmd->add_option("--wl-degree", vocab_args.wl_degree, "Largest rooted-subgraph degree D")
      ->check(CLI::NonNegativeNumber);
  vocab_cmd->add_option("--min-count", vocab_args.min_count, "Drop tokens seen fewer times")
      ->check(CLI::PositiveNumber);
  vocab_cmd->add_flag("--edge-labels", vocab_args.edge_labels, "Fold edge labels into subgraph tokens");
  vocab_cmd->add_option("--output", vocab_args.output, "TSV path (default: stdout)");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Learn graph embeddings; writes embeddings, model and manifest");
  add_dataset_options(train_cmd, train_args.data, false);
  add_train_options(train_cmd, train_args.config);
  train_cmd->add_flag("--edge-labels", train_args.edge_labels, "Fold edge labels into subgraph tokens");
  train_cmd->add_option("--output", train_args.output, "Text embedding file");
  train_cmd->add_option("--model", train_args.model, "Binary model file (default: <output>.model)");
  train_cmd->add_option("--from-manifest", train_args.from_manifest, "Re-run the configuration of a manifest");

  EvalArgs eval_args;
  auto* classify_cmd = app.add_subcommand("classify", "Repeated stratified hold-out classification accuracy");
  auto* cluster_cmd = app.add_subcommand("cluster", "k-means clustering scored by ARI against class labels");
  auto* similar_cmd = app.add_subcommand("similar", "Nearest neighbors of one graph by cosine similarity");
  for (auto* cmd : {classify_cmd, cluster_cmd, similar_cmd}) {
    cmd->add_option("--embeddings", eval_args.embeddings, "Text embedding file");
    cmd->add_option("--model", eval_args.model, "Binary model file");
    cmd->add_option("--seed", eval_args.seed, "Seed");
  }
  for (auto* cmd : {classify_cmd, cluster_cmd}) {
    add_dataset_options(cmd, eval_args.data, true);
    cmd->add_option("--repeats", eval_args.repeats, "Repetitions")->check(CLI::PositiveNumber);
  }
  classify_cmd->add_option("--train-fraction", eval_args.train_fraction, "Training share of each split")
      ->check(CLI::Range(0.0, 1.0));
  cluster_cmd->add_option("--k", eval_args.k, "Cluster count (default: number of classes)")
      ->check(CLI::PositiveNumber);
  similar_cmd->add_option("--query", eval_args.query, "Query graph id")->required();
  similar_cmd->add_option("--top-n", eval_args.top_n, "Number of neighbors")->check(CLI::PositiveNumber);

  InferArgs infer_args;
  auto* infer_cmd = app.add_subcommand("infer", "Embed new graphs against a trained model");
  add_dataset_options(infer_cmd, infer_args.data, true);
  infer_cmd->add_option("--model", infer_args.model, "Binary model file")->required();
  infer_cmd->add_option("--output", infer_args.output, "Also write vectors as a text embedding file");
  infer_cmd->add_option("--epochs", infer_args.epochs, "Override training epochs")->check(CLI::PositiveNumber);
  infer_cmd->add_option("--lr", infer_args.lr, "Override learning rate")->check(CLI::NonNegativeNumber);
  infer_cmd->add_option("--seed", infer_args.seed, "Override seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*vocab_cmd) return run_vocab(vocab_args);
    if (*train_cmd) return run_train(train_args, train_cmd);
    if (*classify_cmd) return run_classify(eval_args);
    if (*cluster_cmd) return run_cluster(eval_args);
    if (*similar_cmd) return run_similar(eval_args);
    if (*infer_cmd) return run_infer(infer_args);
  } catch (const graphvec::ArgumentError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const graphvec::FormatError& e) {
    spdlog::error("{}", e.what());
    return kFormat;
  } catch (const graphvec::VocabularyError& e) {
    spdlog::error("{}", e.what());
    return kVocabulary;
  } catch (const graphvec::NumericalError& e) {
    spdlog::error("{} (step {})", e.what(), e.step());
    return kNumerical;
  } catch (const graphvec::VersionError& e) {
    spdlog::error("{}", e.what());
    return kVersion;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kOther;
  }
  return kUsage;
}

#ifndef GRAPHVEC_PERSISTENCE_HPP_
#define GRAPHVEC_PERSISTENCE_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphvec/error.hpp"
#include "graphvec/model.hpp"
#include "graphvec/vocabulary.hpp"

namespace graphvec {

inline nlohmann::json to_json(const TrainConfig& c) {
  return {{"max_degree", c.max_degree},
          {"dimensions", c.dimensions},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"negative_samples", c.negative_samples},
          {"ns_exponent", c.ns_exponent},
          {"seed", c.seed},
          {"workers", c.workers},
          {"min_count", c.min_count},
          {"exclude_document_negatives", c.exclude_document_negatives},
          {"shuffle_tokens", c.shuffle_tokens}};
}

/// Missing keys keep their defaults.
inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("max_degree", c.max_degree);
  get("dimensions", c.dimensions);
  get("epochs", c.epochs);
  get("learning_rate", c.learning_rate);
  get("negative_samples", c.negative_samples);
  get("ns_exponent", c.ns_exponent);
  get("seed", c.seed);
  get("workers", c.workers);
  get("min_count", c.min_count);
  get("exclude_document_negatives", c.exclude_document_negatives);
  get("shuffle_tokens", c.shuffle_tokens);
  return c;
}

// ---------------------------------------------------------------------------
// Text embeddings: "<rows> <dims>" then "<graph_id> v1 ... vd" per row, %.6g.
// ---------------------------------------------------------------------------

inline void write_embeddings_text(const Matrix& vectors, std::ostream& out) {
  out << vectors.rows() << ' ' << vectors.cols() << '\n';
  char buf[32];
  for (std::size_t r = 0; r < vectors.rows(); ++r) {
    out << r;
    for (const double v : vectors.row(r)) {
      std::snprintf(buf, sizeof buf, " %.6g", v);
      out << buf;
    }
    out << '\n';
  }
}

inline Matrix read_embeddings_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("embedding file is empty");
  std::istringstream header(line);
  std::size_t rows = 0, cols = 0;
  if (!(header >> rows >> cols) || rows == 0 || cols == 0) throw FormatError("bad embedding header '" + line + "'", 1);
  Matrix m(rows, cols);
  std::vector<bool> seen(rows, false);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw FormatError("embedding file truncated", r + 2);
    std::istringstream ls(line);
    std::size_t id = 0;
    if (!(ls >> id) || id >= rows || seen[id]) throw FormatError("bad or repeated graph id", r + 2);
    seen[id] = true;
    auto row = m.row(id);
    for (auto& v : row) {
      if (!(ls >> v)) throw FormatError("expected " + std::to_string(cols) + " values", r + 2);
    }
    std::string extra;
    if (ls >> extra) throw FormatError("too many values", r + 2);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Binary model: magic "GV01", then little-endian u64 graph count, vocabulary
// size and dimensions, the two matrices row-major as IEEE-754 doubles, the
// vocabulary with its WL dictionary, and the training config as JSON.
// ---------------------------------------------------------------------------

inline constexpr std::array<char, 4> kModelMagic{'G', 'V', '0', '1'};

struct SavedModel {
  EmbeddingModel model;
  Vocabulary vocab;
  TrainConfig config;
};

namespace detail {

class LeWriter {
 public:
  explicit LeWriter(std::ostream& out) : out_(out) {}
  void u64(std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(b.data(), 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class LeReader {
 public:
  explicit LeReader(std::istream& in) : in_(in) {}
  std::uint64_t u64() {
    std::array<unsigned char, 8> b;
    in_.read(reinterpret_cast<char*>(b.data()), 8);
    if (!in_) throw VersionError("model file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const auto n = u64();
    if (n > (std::uint64_t{1} << 32)) throw VersionError("model file string length implausible");
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (!in_) throw VersionError("model file truncated");
    return s;
  }

 private:
  std::istream& in_;
};

}  // namespace detail

inline void save_model(const EmbeddingModel& model, const Vocabulary& vocab, const TrainConfig& config,
                       std::ostream& out) {
  if (model.token_vectors.rows() != vocab.size()) throw ArgumentError("vocabulary does not match model");
  out.write(kModelMagic.data(), kModelMagic.size());
  detail::LeWriter w(out);
  w.u64(model.graph_vectors.rows());
  w.u64(model.token_vectors.rows());
  w.u64(model.dimensions());
  for (const double v : model.graph_vectors.data()) w.f64(v);
  for (const double v : model.token_vectors.data()) w.f64(v);

  w.u64(static_cast<std::uint64_t>(vocab.max_degree()));
  w.u64(vocab.min_count());
  w.u64(vocab.options().use_edge_labels ? 1 : 0);
  for (const auto& t : vocab.tokens()) {
    w.u64(static_cast<std::uint64_t>(t.degree));
    w.u64(t.frequency);
    w.str(t.canonical);
  }
  const auto& dict = vocab.relabeler().strings();
  w.u64(dict.size());
  for (const auto& s : dict) w.str(s);
  w.str(to_json(config).dump());
  if (!out) throw Error("failed writing model");
}

inline SavedModel load_model(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kModelMagic) {
    throw VersionError("not a graphvec model file (expected magic GV01)");
  }
  detail::LeReader r(in);
  const auto n_graphs = r.u64();
  const auto n_tokens = r.u64();
  const auto dims = r.u64();
  if (n_graphs == 0 || n_tokens == 0 || dims == 0 || n_graphs * dims > (std::uint64_t{1} << 34) ||
      n_tokens * dims > (std::uint64_t{1} << 34)) {
    throw VersionError("model file has implausible shape");
  }
  EmbeddingModel model{Matrix(n_graphs, dims), Matrix(n_tokens, dims)};
  for (auto& v : model.graph_vectors.data()) v = r.f64();
  for (auto& v : model.token_vectors.data()) v = r.f64();

  const auto max_degree = static_cast<int>(r.u64());
  const auto min_count = r.u64();
  const WlOptions options{r.u64() != 0};
  std::vector<SubgraphToken> tokens;
  tokens.reserve(n_tokens);
  for (std::uint64_t i = 0; i < n_tokens; ++i) {
    SubgraphToken t;
    t.id = static_cast<TokenId>(i);
    t.degree = static_cast<int>(r.u64());
    t.frequency = r.u64();
    t.canonical = r.str();
    tokens.push_back(std::move(t));
  }
  const auto n_dict = r.u64();
  std::vector<std::string> dict;
  dict.reserve(n_dict);
  for (std::uint64_t i = 0; i < n_dict; ++i) dict.push_back(r.str());
  TrainConfig config;
  try {
    config = train_config_from_json(nlohmann::json::parse(r.str()));
  } catch (const nlohmann::json::exception& e) {
    throw VersionError(std::string("model config unreadable: ") + e.what());
  }
  return {std::move(model),
          Vocabulary(std::move(tokens), WlRelabeler::from_strings(std::move(dict)), max_degree, min_count, options),
          config};
}

}  // namespace graphvec

#endif  // GRAPHVEC_PERSISTENCE_HPP_

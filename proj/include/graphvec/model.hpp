#ifndef GRAPHVEC_MODEL_HPP_
#define GRAPHVEC_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/rng.hpp"

namespace graphvec {

/// Hyperparameters of embedding training.
struct TrainConfig {
  int max_degree = 3;
  std::size_t dimensions = 1024;
  int epochs = 100;
  double learning_rate = 0.025;
  int negative_samples = 10;
  /// Exponent applied to token frequencies in the negative distribution; 0 is uniform.
  double ns_exponent = 0.75;
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t min_count = 1;
  /// Reject negatives that occur anywhere in the graph's document, not just the target.
  bool exclude_document_negatives = false;
  /// Visit a document's tokens in a fresh random order each epoch.
  bool shuffle_tokens = false;

  void validate() const {
    if (max_degree < 0) throw ArgumentError("max_degree must be >= 0");
    if (dimensions < 1) throw ArgumentError("dimensions must be >= 1");
    if (epochs < 1) throw ArgumentError("epochs must be >= 1");
    if (!(learning_rate > 0) || !std::isfinite(learning_rate)) throw ArgumentError("learning_rate must be > 0");
    if (negative_samples < 1) throw ArgumentError("negative_samples must be >= 1");
    if (!(ns_exponent >= 0) || !std::isfinite(ns_exponent)) throw ArgumentError("ns_exponent must be >= 0");
    if (workers < 1) throw ArgumentError("workers must be >= 1");
    if (min_count < 1) throw ArgumentError("min_count must be >= 1");
  }
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t r) {
    if (r >= rows_) throw ArgumentError("row " + std::to_string(r) + " out of range");
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    if (r >= rows_) throw ArgumentError("row " + std::to_string(r) + " out of range");
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Graph vectors (one row per graph) and token output vectors (one row per
/// vocabulary entry), both of width `dimensions()`.
struct EmbeddingModel {
  Matrix graph_vectors;
  Matrix token_vectors;

  std::size_t dimensions() const noexcept { return graph_vectors.cols(); }
  bool all_finite() const { return graph_vectors.all_finite() && token_vectors.all_finite(); }

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;
};

/// Fills `out` with uniform(-0.5/dim, 0.5/dim) draws.
inline void init_graph_vector(std::span<double> out, Rng& rng) {
  const double half_width = 0.5 / static_cast<double>(out.size());
  for (auto& v : out) v = rng.uniform(-half_width, half_width);
}

/// Graph vectors drawn uniformly from (-0.5/dim, 0.5/dim); token vectors zero.
inline EmbeddingModel init_model(std::size_t n_graphs, std::size_t vocab_size, const TrainConfig& config) {
  if (n_graphs < 1 || vocab_size < 1) throw ArgumentError("model needs at least one graph and one token");
  config.validate();
  EmbeddingModel model{Matrix(n_graphs, config.dimensions), Matrix(vocab_size, config.dimensions)};
  Rng rng(derive_seed(config.seed, SeedStream::kInit));
  for (std::size_t g = 0; g < n_graphs; ++g) init_graph_vector(model.graph_vectors.row(g), rng);
  return model;
}

}  // namespace graphvec

#endif  // GRAPHVEC_MODEL_HPP_

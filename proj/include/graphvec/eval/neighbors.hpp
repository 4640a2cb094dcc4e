#ifndef GRAPHVEC_EVAL_NEIGHBORS_HPP_
#define GRAPHVEC_EVAL_NEIGHBORS_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <spdlog/spdlog.h>

#include "graphvec/error.hpp"
#include "graphvec/model.hpp"

namespace graphvec {

/// Cosine similarity; 0 when either vector has zero norm.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("cosine of vectors with different sizes");
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

struct Neighbor {
  std::size_t graph_id;
  double cosine;
};

/// The `top_n` rows most cosine-similar to row `query`, excluding the query
/// itself. Ties are ordered by ascending graph id.
inline std::vector<Neighbor> nearest_neighbors(const Matrix& embeddings, std::size_t query, std::size_t top_n) {
  const std::size_t n = embeddings.rows();
  if (query >= n) throw ArgumentError("query graph " + std::to_string(query) + " out of range");
  if (top_n < 1 || top_n >= n) {
    throw ArgumentError("top_n must be in [1, " + std::to_string(n) + "), got " + std::to_string(top_n));
  }
  const auto q = embeddings.row(query);
  const auto is_zero = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0; });
  };
  if (is_zero(q)) spdlog::warn("query graph {} has a zero vector; all similarities are 0", query);

  std::vector<Neighbor> all;
  all.reserve(n - 1);
  for (std::size_t g = 0; g < n; ++g) {
    if (g == query) continue;
    const auto v = embeddings.row(g);
    if (is_zero(v)) spdlog::warn("graph {} has a zero vector; similarity set to 0", g);
    all.push_back({g, cosine(q, v)});
  }
  std::stable_sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.graph_id < b.graph_id;
  });
  all.resize(top_n);
  return all;
}

}  // namespace graphvec

#endif  // GRAPHVEC_EVAL_NEIGHBORS_HPP_

#ifndef GRAPHVEC_TESTS_ORACLES_HPP_
#define GRAPHVEC_TESTS_ORACLES_HPP_

// Slow, independent reference computations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "graphvec/model.hpp"
#include "graphvec/rng.hpp"
#include "graphvec/trainer.hpp"

namespace graphvec::testing {

/// ns_loss in extended precision straight from the definition.
inline long double slow_ns_loss(const std::vector<double>& g, const std::vector<double>& t,
                                const std::vector<std::vector<double>>& negs) {
  const auto dotl = [](const std::vector<double>& a, const std::vector<double>& b) {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
    return s;
  };
  const auto sig = [](long double x) { return 1.0L / (1.0L + std::exp(-x)); };
  long double loss = -std::log(sig(dotl(g, t)));
  for (const auto& n : negs) loss -= std::log(sig(-dotl(g, n)));
  return loss;
}

/// Loss of one pair read straight from model rows.
inline double model_pair_loss(const EmbeddingModel& m, std::size_t graph, TokenId target,
                              const std::vector<TokenId>& negatives) {
  std::vector<std::span<const double>> negs;
  for (const auto n : negatives) negs.push_back(m.token_vectors.row(n));
  return ns_loss(m.graph_vectors.row(graph), m.token_vectors.row(target), negs);
}

/// Relative error ||a - b|| / max(||a||, ||b||); 0 when both are ~0.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  if (scale < 1e-12) return 0;
  return std::sqrt(diff) / scale;
}

struct GradientCheck {
  double max_relative_error = 0;
  int dimensions = 0;
  int negatives = 0;
};

/// Builds a random model (dim <= 8, k <= 5 negatives, possibly repeating or
/// hitting the target), takes one train_pair step and compares the implied
/// gradient (before - after) / lr of every participating row with central
/// finite differences of the loss at step h.
inline GradientCheck check_train_pair_gradient(std::uint64_t seed, double h = 1e-4, double lr = 1e-3) {
  Rng rng(seed);
  const auto dim = static_cast<std::size_t>(1 + rng.below(8));
  const int k = static_cast<int>(1 + rng.below(5));
  const std::size_t n_graphs = 3, n_tokens = 7;
  EmbeddingModel m{Matrix(n_graphs, dim), Matrix(n_tokens, dim)};
  for (auto& v : m.graph_vectors.data()) v = rng.uniform(-1, 1);
  for (auto& v : m.token_vectors.data()) v = rng.uniform(-1, 1);
  const auto graph = static_cast<std::size_t>(rng.below(n_graphs));
  const auto target = static_cast<TokenId>(rng.below(n_tokens));
  std::vector<TokenId> negatives;
  for (int i = 0; i < k; ++i) negatives.push_back(static_cast<TokenId>(rng.below(n_tokens)));

  // Finite differences for each distinct participating row.
  const auto fd_row = [&](bool is_graph, std::size_t row) {
    EmbeddingModel probe = m;
    std::vector<double> grad(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      auto r = is_graph ? probe.graph_vectors.row(row) : probe.token_vectors.row(row);
      const double orig = r[i];
      r[i] = orig + h;
      const double up = model_pair_loss(probe, graph, target, negatives);
      r[i] = orig - h;
      const double down = model_pair_loss(probe, graph, target, negatives);
      r[i] = orig;
      grad[i] = (up - down) / (2 * h);
    }
    return grad;
  };

  EmbeddingModel after = m;
  train_pair(after, graph, target, negatives, lr);
  const auto implied = [&](bool is_graph, std::size_t row) {
    const auto b = is_graph ? m.graph_vectors.row(row) : m.token_vectors.row(row);
    const auto a = is_graph ? after.graph_vectors.row(row) : after.token_vectors.row(row);
    std::vector<double> grad(dim);
    for (std::size_t i = 0; i < dim; ++i) grad[i] = (b[i] - a[i]) / lr;
    return grad;
  };

  GradientCheck out{0, static_cast<int>(dim), k};
  out.max_relative_error = relative_error(implied(true, graph), fd_row(true, graph));
  std::set<TokenId> rows(negatives.begin(), negatives.end());
  rows.insert(target);
  for (const auto r : rows) {
    out.max_relative_error = std::max(out.max_relative_error, relative_error(implied(false, r), fd_row(false, r)));
  }
  return out;
}

/// Adjusted Rand index from the four pair categories, enumerating all pairs.
inline double brute_force_ari(const std::vector<int>& p, const std::vector<int>& q) {
  std::int64_t both = 0, only_p = 0, only_q = 0, neither = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const bool sp = p[i] == p[j], sq = q[i] == q[j];
      if (sp && sq) ++both;
      else if (sp) ++only_p;
      else if (sq) ++only_q;
      else ++neither;
    }
  }
  const std::int64_t num = 2 * (both * neither - only_p * only_q);
  const std::int64_t den = (both + only_p) * (only_p + neither) + (both + only_q) * (only_q + neither);
  if (den == 0) return 1.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

inline std::vector<int> random_partition(Rng& rng, std::size_t n, int max_clusters) {
  std::vector<int> p(n);
  const auto c = static_cast<std::uint64_t>(1 + rng.below(static_cast<std::uint64_t>(max_clusters)));
  for (auto& x : p) x = static_cast<int>(rng.below(c)) * 3 - 2;  // arbitrary, non-dense ids
  return p;
}

}  // namespace graphvec::testing

#endif  // GRAPHVEC_TESTS_ORACLES_HPP_

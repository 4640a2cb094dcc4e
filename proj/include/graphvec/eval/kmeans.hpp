#ifndef GRAPHVEC_EVAL_KMEANS_HPP_
#define GRAPHVEC_EVAL_KMEANS_HPP_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/model.hpp"
#include "graphvec/rng.hpp"

namespace graphvec {

struct ClusteringResult {
  std::vector<int> assignments;
  int k = 0;
  double inertia = 0;
  int iterations = 0;
  /// Inertia after each assignment step.
  std::vector<double> inertia_history;
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace detail

/// k-means with k-means++ seeding and Lloyd iterations until the assignment
/// stops changing or `max_iterations` is reached.
///
/// A centroid that loses all its points is moved onto the point farthest
/// from its own centroid (lowest index on ties). Deterministic for a seed.
inline ClusteringResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iterations = 300) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw ArgumentError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  const auto kk = static_cast<std::size_t>(k);
  Rng rng(seed);

  Matrix centroids(kk, dim);
  const auto set_centroid = [&](std::size_t c, std::size_t p) {
    const auto src = points.row(p);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
  };

  // k-means++ seeding.
  set_centroid(0, static_cast<std::size_t>(rng.below(n)));
  std::vector<double> nearest(n);
  for (std::size_t p = 0; p < n; ++p) nearest[p] = detail::squared_distance(points.row(p), centroids.row(0));
  for (std::size_t c = 1; c < kk; ++c) {
    double total = 0;
    for (const double d : nearest) total += d;
    std::size_t pick = n - 1;
    if (total > 0) {
      const double target = rng.uniform01() * total;
      double acc = 0;
      for (std::size_t p = 0; p < n; ++p) {
        acc += nearest[p];
        if (acc > target && nearest[p] > 0) {
          pick = p;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(n));
    }
    set_centroid(c, pick);
    for (std::size_t p = 0; p < n; ++p) {
      nearest[p] = std::min(nearest[p], detail::squared_distance(points.row(p), centroids.row(c)));
    }
  }

  ClusteringResult result;
  result.k = k;
  result.assignments.assign(n, -1);
  std::vector<double> distance(n);
  std::vector<std::size_t> counts(kk);

  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    double inertia = 0;
    for (std::size_t p = 0; p < n; ++p) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = detail::squared_distance(points.row(p), centroids.row(c));
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      changed |= result.assignments[p] != best;
      result.assignments[p] = best;
      distance[p] = best_d;
      inertia += best_d;
    }
    result.inertia = inertia;
    result.inertia_history.push_back(inertia);
    result.iterations = iter + 1;
    if (!changed) break;

    std::fill(counts.begin(), counts.end(), 0);
    std::fill(centroids.data().begin(), centroids.data().end(), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      const auto c = static_cast<std::size_t>(result.assignments[p]);
      ++counts[c];
      auto row = centroids.row(c);
      const auto src = points.row(p);
      for (std::size_t i = 0; i < dim; ++i) row[i] += src[i];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] == 0) {
        std::size_t far = 0;
        for (std::size_t p = 1; p < n; ++p) {
          if (distance[p] > distance[far]) far = p;
        }
        set_centroid(c, far);
        distance[far] = 0;
        continue;
      }
      for (auto& v : centroids.row(c)) v /= static_cast<double>(counts[c]);
    }
  }
  return result;
}

}  // namespace graphvec

#endif  // GRAPHVEC_EVAL_KMEANS_HPP_

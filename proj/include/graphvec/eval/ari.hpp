#ifndef GRAPHVEC_EVAL_ARI_HPP_
#define GRAPHVEC_EVAL_ARI_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "graphvec/error.hpp"

namespace graphvec {

/// Adjusted Rand index of two partitions given as per-item cluster ids.
///
/// Computed from the contingency table with integer pair counts and a
/// single final division. When both partitions are trivial in the same way
/// (one cluster each, or all singletons) the index is 0/0 and 1.0 is returned.
inline double adjusted_rand_index(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) throw ArgumentError("partitions cover different item counts");
  if (pred.size() < 2) throw ArgumentError("adjusted rand index needs at least 2 items");

  const auto pairs = [](std::int64_t m) -> __int128 { return static_cast<__int128>(m) * (m - 1) / 2; };
  std::map<std::pair<int, int>, std::int64_t> cells;
  std::map<int, std::int64_t> rows, cols;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++cells[{pred[i], truth[i]}];
    ++rows[pred[i]];
    ++cols[truth[i]];
  }
  __int128 index = 0, a = 0, b = 0;
  for (const auto& [_, m] : cells) index += pairs(m);
  for (const auto& [_, m] : rows) a += pairs(m);
  for (const auto& [_, m] : cols) b += pairs(m);
  const __int128 n2 = pairs(static_cast<std::int64_t>(pred.size()));

  // (index - a*b/n2) / ((a+b)/2 - a*b/n2), scaled by 2*n2.
  const __int128 num = 2 * n2 * index - 2 * a * b;
  const __int128 den = n2 * (a + b) - 2 * a * b;
  if (den == 0) return 1.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace graphvec

#endif  // GRAPHVEC_EVAL_ARI_HPP_

#ifndef GRAPHVEC_EVAL_WL_FEATURES_HPP_
#define GRAPHVEC_EVAL_WL_FEATURES_HPP_

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/model.hpp"
#include "graphvec/vocabulary.hpp"

namespace graphvec {

/// Bag-of-subgraphs counts: one sparse row per graph, entries sorted by token id.
struct SparseCountMatrix {
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<TokenId, std::uint32_t>>> rows;

  std::uint64_t row_sum(std::size_t r) const {
    std::uint64_t s = 0;
    for (const auto& [_, c] : rows.at(r)) s += c;
    return s;
  }

  Matrix to_dense() const {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto row = m.row(r);
      for (const auto& [t, c] : rows[r]) row[t] = c;
    }
    return m;
  }
};

/// Explicit WL-kernel feature map: entry (g, t) counts token t in graph g's document.
inline SparseCountMatrix wl_feature_vectors(const std::vector<GraphDocument>& documents, const Vocabulary& vocab) {
  SparseCountMatrix out{vocab.size(), {}};
  out.rows.reserve(documents.size());
  for (const auto& doc : documents) {
    auto ids = doc.token_ids;
    std::sort(ids.begin(), ids.end());
    auto& row = out.rows.emplace_back();
    for (const auto t : ids) {
      if (t >= vocab.size()) throw ArgumentError("document references unknown token");
      if (!row.empty() && row.back().first == t) {
        ++row.back().second;
      } else {
        row.emplace_back(t, 1);
      }
    }
  }
  return out;
}

}  // namespace graphvec

#endif  // GRAPHVEC_EVAL_WL_FEATURES_HPP_

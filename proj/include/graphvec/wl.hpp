#ifndef GRAPHVEC_WL_HPP_
#define GRAPHVEC_WL_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/graph.hpp"

namespace graphvec {

struct WlOptions {
  /// Prefix each neighbor's sub-token with the connecting edge label.
  bool use_edge_labels = false;
};

/// Escapes the delimiter characters `\ ( ) , # :` and line/tab breaks so a
/// raw label never contains an unescaped delimiter.
inline std::string escape_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (const char c : label) {
    switch (c) {
      case '\\': case '(': case ')': case ',': case '#': case ':':
        out.push_back('\\');
        out.push_back(c);
        break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

namespace detail {

inline std::string join_sorted(std::string own, std::vector<std::string> children) {
  std::sort(children.begin(), children.end());
  own.push_back('(');
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) own.push_back(',');
    own += children[i];
  }
  own.push_back(')');
  return own;
}

}  // namespace detail

/// Canonical string of the degree-d rooted subgraph around `root`, computed
/// by direct recursion.
///
/// d = 0 yields the (escaped) node label. For d > 0 the result is the root's
/// degree-(d-1) string followed by the byte-sorted degree-(d-1) strings of
/// its neighbors: `own(child,child,...)`. Cost grows with the number of
/// walks of length d, so this is meant for small graphs and as a reference
/// for extract_all_tokens.
inline std::string get_wl_subgraph(NodeId root, const Graph& graph, int d, const WlOptions& options = {}) {
  if (d < 0) throw ArgumentError("subgraph degree must be >= 0, got " + std::to_string(d));
  if (root >= graph.node_count()) throw ArgumentError("root " + std::to_string(root) + " not in graph");
  if (d == 0) return escape_label(graph.node_label(root));

  const auto& nbrs = graph.neighbors(root);
  std::vector<std::string> children;
  children.reserve(nbrs.size());
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    auto child = get_wl_subgraph(nbrs[k], graph, d - 1, options);
    if (options.use_edge_labels && graph.has_edge_labels()) {
      child = escape_label(graph.edge_label_at(root, k)) + ":" + child;
    }
    children.push_back(std::move(child));
  }
  return detail::join_sorted(get_wl_subgraph(root, graph, d - 1, options), std::move(children));
}

/// Dictionary that compresses canonical strings into dense integer labels.
///
/// Shared across a corpus so equal subtrees in different graphs receive the
/// same compressed label. Ids are assigned in first-insertion order.
class WlRelabeler {
 public:
  std::uint32_t compress(const std::string& canonical) {
    const auto [it, inserted] = index_.try_emplace(canonical, static_cast<std::uint32_t>(strings_.size()));
    if (inserted) strings_.push_back(canonical);
    return it->second;
  }

  std::optional<std::uint32_t> find(const std::string& canonical) const {
    const auto it = index_.find(canonical);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return strings_.size(); }
  const std::vector<std::string>& strings() const noexcept { return strings_; }

  static WlRelabeler from_strings(std::vector<std::string> strings) {
    WlRelabeler r;
    r.index_.reserve(strings.size());
    for (std::uint32_t i = 0; i < strings.size(); ++i) {
      if (!r.index_.try_emplace(strings[i], i).second) throw ArgumentError("duplicate relabeler entry: " + strings[i]);
    }
    r.strings_ = std::move(strings);
    return r;
  }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> strings_;
};

/// Canonical tokens for every (node, d) pair, d in [0, max_degree], laid out
/// node-major: entry `n * (max_degree + 1) + d`.
///
/// Runs WL relabeling sweeps: after sweep d every node holds a compressed
/// label standing for its degree-d rooted subgraph. Tokens with d > 0 are
/// written as `#own(#child,...)` over compressed labels, so the strings stay
/// short while inducing the same equality classes as get_wl_subgraph.
inline std::vector<std::string> extract_all_tokens(const Graph& graph, int max_degree, WlRelabeler& relabeler,
                                                   const WlOptions& options = {}) {
  if (max_degree < 0) throw ArgumentError("max degree must be >= 0, got " + std::to_string(max_degree));
  const std::size_t n = graph.node_count();
  const std::size_t stride = static_cast<std::size_t>(max_degree) + 1;
  const bool edge_labels = options.use_edge_labels && graph.has_edge_labels();

  std::vector<std::string> tokens(n * stride);
  std::vector<std::uint32_t> current(n), next(n);
  for (NodeId v = 0; v < n; ++v) {
    tokens[v * stride] = escape_label(graph.node_label(v));
    current[v] = relabeler.compress(tokens[v * stride]);
  }

  std::vector<std::string> children;
  for (std::size_t d = 1; d < stride; ++d) {
    for (NodeId v = 0; v < n; ++v) {
      const auto& nbrs = graph.neighbors(v);
      children.clear();
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        std::string child = "#" + std::to_string(current[nbrs[k]]);
        if (edge_labels) child = escape_label(graph.edge_label_at(v, k)) + ":" + child;
        children.push_back(std::move(child));
      }
      auto& token = tokens[v * stride + d];
      token = detail::join_sorted("#" + std::to_string(current[v]), children);
      next[v] = relabeler.compress(token);
    }
    std::swap(current, next);
  }
  return tokens;
}

/// Convenience overload with a private dictionary; tokens are only
/// comparable within this one call.
inline std::vector<std::string> extract_all_tokens(const Graph& graph, int max_degree, const WlOptions& options = {}) {
  WlRelabeler relabeler;
  return extract_all_tokens(graph, max_degree, relabeler, options);
}

}  // namespace graphvec

#endif  // GRAPHVEC_WL_HPP_

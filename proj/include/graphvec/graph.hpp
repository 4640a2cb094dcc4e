#ifndef GRAPHVEC_GRAPH_HPP_
#define GRAPHVEC_GRAPH_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graphvec/error.hpp"

namespace graphvec {

using NodeId = std::uint32_t;

/// Undirected node-labeled graph with dense 0-based node ids.
///
/// Adjacency lists are sorted, symmetric and free of self-loops and
/// duplicates. Every node carries exactly one label. Edge labels are
/// optional; when present they are stored parallel to the adjacency lists.
/// Instances are only produced by GraphBuilder, which enforces the above.
class Graph {
 public:
  std::size_t graph_id() const noexcept { return graph_id_; }
  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept {
    std::size_t twice = 0;
    for (const auto& nbrs : adjacency_) twice += nbrs.size();
    return twice / 2;
  }
  std::size_t degree(NodeId n) const { return adjacency_.at(n).size(); }

  const std::vector<NodeId>& neighbors(NodeId n) const { return adjacency_.at(n); }
  const std::vector<std::vector<NodeId>>& adjacency() const noexcept { return adjacency_; }

  const std::string& node_label(NodeId n) const { return node_labels_.at(n); }
  const std::vector<std::string>& node_labels() const noexcept { return node_labels_; }

  bool has_edge_labels() const noexcept { return !edge_labels_.empty(); }
  /// Label of the k-th edge in neighbors(n). Requires has_edge_labels().
  const std::string& edge_label_at(NodeId n, std::size_t k) const { return edge_labels_.at(n).at(k); }
  const std::vector<std::vector<std::string>>& edge_labels() const noexcept { return edge_labels_; }

  const std::optional<int>& class_label() const noexcept { return class_label_; }

  /// Same structure under a different id, labels or class. Structure is shared by value.
  Graph with_node_labels(std::vector<std::string> labels) const {
    if (labels.size() != node_count()) {
      throw ArgumentError("node label count " + std::to_string(labels.size()) +
                          " does not match node count " + std::to_string(node_count()));
    }
    Graph g = *this;
    g.node_labels_ = std::move(labels);
    return g;
  }
  Graph with_graph_id(std::size_t id) const {
    Graph g = *this;
    g.graph_id_ = id;
    return g;
  }
  Graph with_class_label(std::optional<int> label) const {
    Graph g = *this;
    g.class_label_ = label;
    return g;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend class GraphBuilder;
  Graph() = default;

  std::size_t graph_id_ = 0;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::string> node_labels_;
  std::vector<std::vector<std::string>> edge_labels_;
  std::optional<int> class_label_;
};

/// Counters for input anomalies that are repaired rather than rejected.
struct IngestStats {
  std::size_t self_loops = 0;
  std::size_t duplicate_edges = 0;

  IngestStats& operator+=(const IngestStats& o) {
    self_loops += o.self_loops;
    duplicate_edges += o.duplicate_edges;
    return *this;
  }
};

/// Node labels are the decimal degree of each node.
inline std::vector<std::string> degree_labels(const Graph& graph) {
  std::vector<std::string> labels;
  labels.reserve(graph.node_count());
  for (const auto& nbrs : graph.adjacency()) labels.push_back(std::to_string(nbrs.size()));
  return labels;
}

inline Graph relabel_by_degree(const Graph& graph) {
  return graph.with_node_labels(degree_labels(graph));
}

/// Accumulates edges of one graph and produces a normalized Graph.
///
/// An edge (u, v) and its reverse (v, u) denote the same undirected edge.
/// Repeating the same ordered pair counts as a duplicate; self-loops are
/// dropped. Both are tallied in stats().
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t node_count) : node_count_(node_count) {
    if (node_count == 0) throw ArgumentError("graph must have at least one node");
  }

  /// Returns false when the edge was dropped (self-loop or repeated pair).
  bool add_edge(NodeId u, NodeId v, std::optional<std::string> label = std::nullopt) {
    if (u >= node_count_ || v >= node_count_) {
      throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") outside node range [0, " + std::to_string(node_count_) + ")");
    }
    if (u == v) {
      ++stats_.self_loops;
      return false;
    }
    if (!seen_directed_.insert({u, v}).second) {
      ++stats_.duplicate_edges;
      return false;
    }
    if (label) any_edge_label_ = true;
    edges_.push_back({std::min(u, v), std::max(u, v), label.value_or(std::string{})});
    return true;
  }

  GraphBuilder& node_labels(std::vector<std::string> labels) {
    if (labels.size() != node_count_) {
      throw ArgumentError("node label count " + std::to_string(labels.size()) +
                          " does not match node count " + std::to_string(node_count_));
    }
    labels_ = std::move(labels);
    return *this;
  }

  GraphBuilder& class_label(std::optional<int> label) {
    class_label_ = label;
    return *this;
  }

  const IngestStats& stats() const noexcept { return stats_; }

  /// Graphs without node labels are labeled by degree.
  Graph build(std::size_t graph_id) const {
    auto edges = edges_;
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.lo, a.hi) < std::pair(b.lo, b.hi);
    });
    // (u,v) followed by (v,u) collapses to one undirected edge; first label wins.
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) { return a.lo == b.lo && a.hi == b.hi; }),
                edges.end());

    Graph g;
    g.graph_id_ = graph_id;
    g.adjacency_.assign(node_count_, {});
    std::vector<std::vector<std::pair<NodeId, std::string>>> half(node_count_);
    for (const auto& e : edges) {
      half[e.lo].emplace_back(e.hi, e.label);
      half[e.hi].emplace_back(e.lo, e.label);
    }
    if (any_edge_label_) g.edge_labels_.assign(node_count_, {});
    for (std::size_t n = 0; n < node_count_; ++n) {
      std::sort(half[n].begin(), half[n].end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      g.adjacency_[n].reserve(half[n].size());
      for (auto& [nbr, lbl] : half[n]) {
        g.adjacency_[n].push_back(nbr);
        if (any_edge_label_) g.edge_labels_[n].push_back(std::move(lbl));
      }
    }
    g.class_label_ = class_label_;
    g.node_labels_ = labels_ ? *labels_ : degree_labels(g);
    return g;
  }

 private:
  struct Edge {
    NodeId lo;
    NodeId hi;
    std::string label;
  };

  std::size_t node_count_;
  std::vector<Edge> edges_;
  std::set<std::pair<NodeId, NodeId>> seen_directed_;
  std::optional<std::vector<std::string>> labels_;
  std::optional<int> class_label_;
  bool any_edge_label_ = false;
  IngestStats stats_;
};

/// Ordered, nonempty collection of graphs; the i-th graph has graph_id i.
class GraphCorpus {
 public:
  GraphCorpus(std::string name, std::vector<Graph> graphs, IngestStats stats = {})
      : name_(std::move(name)), graphs_(std::move(graphs)), stats_(stats) {
    if (graphs_.empty()) throw ArgumentError("corpus '" + name_ + "' has no graphs");
    for (std::size_t i = 0; i < graphs_.size(); ++i) {
      if (graphs_[i].graph_id() != i) {
        throw ArgumentError("graph at position " + std::to_string(i) + " has id " +
                            std::to_string(graphs_[i].graph_id()));
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return graphs_.size(); }
  const Graph& operator[](std::size_t i) const { return graphs_.at(i); }
  const std::vector<Graph>& graphs() const noexcept { return graphs_; }
  auto begin() const noexcept { return graphs_.begin(); }
  auto end() const noexcept { return graphs_.end(); }
  const IngestStats& stats() const noexcept { return stats_; }

  bool has_class_labels() const {
    return std::all_of(graphs_.begin(), graphs_.end(),
                       [](const Graph& g) { return g.class_label().has_value(); });
  }
  std::vector<int> class_labels() const {
    std::vector<int> out;
    out.reserve(graphs_.size());
    for (const auto& g : graphs_) {
      if (!g.class_label()) throw ArgumentError("graph " + std::to_string(g.graph_id()) + " has no class label");
      out.push_back(*g.class_label());
    }
    return out;
  }

 private:
  std::string name_;
  std::vector<Graph> graphs_;
  IngestStats stats_;
};

}  // namespace graphvec

#endif  // GRAPHVEC_GRAPH_HPP_

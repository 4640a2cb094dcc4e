#ifndef GRAPHVEC_DATASET_HPP_
#define GRAPHVEC_DATASET_HPP_

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphvec/error.hpp"
#include "graphvec/graph.hpp"

namespace graphvec {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(std::string_view text, const std::filesystem::path& file, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError(file.string() + ": expected integer, got '" + std::string(text) + "'", line);
  }
  return value;
}

/// Nonblank lines of a file, each paired with its 1-based line number.
inline std::vector<std::pair<std::size_t, std::string>> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open " + file.string());
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!trim(line).empty()) lines.emplace_back(no, line);
  }
  return lines;
}

}  // namespace detail

/// Reads a TU benchmark directory (`<name>_A.txt`, `<name>_graph_indicator.txt`,
/// and optionally `_node_labels`, `_graph_labels`, `_edge_labels`).
///
/// Global 1-based node ids are renumbered per graph from 0 in file order.
/// Without a node label file, nodes are labeled by degree.
inline GraphCorpus parse_tu_dataset(const std::filesystem::path& directory, const std::string& name) {
  namespace fs = std::filesystem;
  using detail::parse_int;
  if (!fs::is_directory(directory)) throw FormatError("dataset directory not found: " + directory.string());

  const auto file = [&](const char* suffix) { return directory / (name + suffix); };
  const fs::path a_file = file("_A.txt");
  const fs::path indicator_file = file("_graph_indicator.txt");
  for (const auto& f : {a_file, indicator_file}) {
    if (!fs::is_regular_file(f)) throw FormatError("missing mandatory file " + f.string());
  }

  // Global node n (0-based) -> graph index and local index.
  const auto indicator_lines = detail::read_lines(indicator_file);
  std::vector<std::size_t> node_graph;
  node_graph.reserve(indicator_lines.size());
  std::size_t n_graphs = 0;
  for (const auto& [no, text] : indicator_lines) {
    const auto gid = parse_int<std::int64_t>(text, indicator_file, no);
    if (gid < 1) throw FormatError(indicator_file.string() + ": graph id must be >= 1", no);
    node_graph.push_back(static_cast<std::size_t>(gid - 1));
    n_graphs = std::max(n_graphs, static_cast<std::size_t>(gid));
  }
  if (n_graphs == 0) throw FormatError(indicator_file.string() + ": no nodes");

  std::vector<std::size_t> graph_size(n_graphs, 0);
  std::vector<NodeId> local_id(node_graph.size());
  for (std::size_t n = 0; n < node_graph.size(); ++n) {
    local_id[n] = static_cast<NodeId>(graph_size[node_graph[n]]++);
  }
  for (std::size_t g = 0; g < n_graphs; ++g) {
    if (graph_size[g] == 0) throw FormatError(indicator_file.string() + ": graph " + std::to_string(g + 1) + " is empty");
  }

  std::vector<std::vector<std::string>> labels(n_graphs);
  if (const auto f = file("_node_labels.txt"); fs::is_regular_file(f)) {
    const auto lines = detail::read_lines(f);
    if (lines.size() != node_graph.size()) {
      throw FormatError(f.string() + ": expected " + std::to_string(node_graph.size()) + " labels, found " +
                        std::to_string(lines.size()));
    }
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const auto& [no, text] = lines[n];
      labels[node_graph[n]].push_back(std::to_string(parse_int<std::int64_t>(text, f, no)));
    }
  }

  std::vector<std::optional<int>> classes(n_graphs);
  if (const auto f = file("_graph_labels.txt"); fs::is_regular_file(f)) {
    const auto lines = detail::read_lines(f);
    if (lines.size() != n_graphs) {
      throw FormatError(f.string() + ": expected " + std::to_string(n_graphs) + " graph labels, found " +
                        std::to_string(lines.size()));
    }
    for (std::size_t g = 0; g < n_graphs; ++g) classes[g] = parse_int<int>(lines[g].second, f, lines[g].first);
  }

  const auto a_lines = detail::read_lines(a_file);
  std::optional<std::vector<std::pair<std::size_t, std::string>>> edge_label_lines;
  if (const auto f = file("_edge_labels.txt"); fs::is_regular_file(f)) {
    edge_label_lines = detail::read_lines(f);
    if (edge_label_lines->size() != a_lines.size()) {
      throw FormatError(f.string() + ": expected " + std::to_string(a_lines.size()) + " edge labels, found " +
                        std::to_string(edge_label_lines->size()));
    }
  }

  std::vector<GraphBuilder> builders;
  builders.reserve(n_graphs);
  for (std::size_t g = 0; g < n_graphs; ++g) builders.emplace_back(graph_size[g]);

  for (std::size_t i = 0; i < a_lines.size(); ++i) {
    const auto& [no, text] = a_lines[i];
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw FormatError(a_file.string() + ": expected 'i, j'", no);
    const auto u = parse_int<std::int64_t>(std::string_view(text).substr(0, comma), a_file, no);
    const auto v = parse_int<std::int64_t>(std::string_view(text).substr(comma + 1), a_file, no);
    const auto limit = static_cast<std::int64_t>(node_graph.size());
    if (u < 1 || v < 1 || u > limit || v > limit) {
      throw FormatError(a_file.string() + ": node id outside [1, " + std::to_string(limit) + "]", no);
    }
    const auto gu = node_graph[u - 1];
    if (gu != node_graph[v - 1]) {
      throw FormatError(a_file.string() + ": edge " + std::to_string(u) + ", " + std::to_string(v) +
                            " connects graphs " + std::to_string(gu + 1) + " and " +
                            std::to_string(node_graph[v - 1] + 1),
                        no);
    }
    std::optional<std::string> label;
    if (edge_label_lines) {
      const auto& [lno, ltext] = (*edge_label_lines)[i];
      label = std::to_string(parse_int<std::int64_t>(ltext, file("_edge_labels.txt"), lno));
    }
    builders[gu].add_edge(local_id[u - 1], local_id[v - 1], std::move(label));
  }

  std::vector<Graph> graphs;
  graphs.reserve(n_graphs);
  IngestStats stats;
  for (std::size_t g = 0; g < n_graphs; ++g) {
    if (!labels[g].empty()) builders[g].node_labels(std::move(labels[g]));
    builders[g].class_label(classes[g]);
    stats += builders[g].stats();
    graphs.push_back(builders[g].build(g));
  }
  return GraphCorpus(name, std::move(graphs), stats);
}

/// Reads one graph per line: `{"edges": [[u, v], ...], "node_labels": [...], "class": c}`.
///
/// `node_labels` and `class` are optional; `edge_labels` may accompany
/// `edges` as a parallel list. Node count is the label count when labels are
/// given, otherwise one past the largest endpoint.
inline GraphCorpus parse_jsonl_dataset(const std::filesystem::path& file) {
  using nlohmann::json;
  if (!std::filesystem::is_regular_file(file)) throw FormatError("dataset file not found: " + file.string());
  const auto lines = detail::read_lines(file);

  std::vector<Graph> graphs;
  IngestStats stats;
  for (const auto& [no, text] : lines) {
    const auto fail = [&, no = no](const std::string& why) -> FormatError {
      return FormatError(file.string() + ": " + why, no);
    };
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw fail(std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw fail("record must be an object");
    if (!record.contains("edges") || !record["edges"].is_array()) throw fail("missing 'edges' array");

    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    for (const auto& e : record["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw fail("each edge must be a pair of integers");
      }
      edges.emplace_back(e[0].get<std::int64_t>(), e[1].get<std::int64_t>());
    }

    std::optional<std::vector<std::string>> labels;
    if (record.contains("node_labels")) {
      const auto& nl = record["node_labels"];
      if (!nl.is_array()) throw fail("'node_labels' must be an array");
      labels.emplace();
      for (const auto& l : nl) {
        if (l.is_string()) {
          labels->push_back(l.get<std::string>());
        } else if (l.is_number_integer()) {
          labels->push_back(std::to_string(l.get<std::int64_t>()));
        } else {
          throw fail("node labels must be strings");
        }
      }
    }

    std::optional<std::vector<std::string>> edge_labels;
    if (record.contains("edge_labels")) {
      const auto& el = record["edge_labels"];
      if (!el.is_array() || el.size() != edges.size()) throw fail("'edge_labels' must parallel 'edges'");
      edge_labels.emplace();
      for (const auto& l : el) {
        if (l.is_string()) {
          edge_labels->push_back(l.get<std::string>());
        } else if (l.is_number_integer()) {
          edge_labels->push_back(std::to_string(l.get<std::int64_t>()));
        } else {
          throw fail("edge labels must be strings");
        }
      }
    }

    std::optional<int> cls;
    if (record.contains("class")) {
      if (!record["class"].is_number_integer()) throw fail("'class' must be an integer");
      cls = record["class"].get<int>();
    }

    std::int64_t max_endpoint = -1;
    for (const auto& [u, v] : edges) {
      if (u < 0 || v < 0) throw fail("negative node index");
      max_endpoint = std::max({max_endpoint, u, v});
    }
    const std::size_t n_nodes = labels ? labels->size() : static_cast<std::size_t>(max_endpoint + 1);
    if (n_nodes == 0) throw fail("empty graph");
    if (max_endpoint >= static_cast<std::int64_t>(n_nodes)) {
      throw fail("edge endpoint " + std::to_string(max_endpoint) + " outside " + std::to_string(n_nodes) + " nodes");
    }

    GraphBuilder builder(n_nodes);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      std::optional<std::string> lbl;
      if (edge_labels) lbl = (*edge_labels)[i];
      builder.add_edge(static_cast<NodeId>(edges[i].first), static_cast<NodeId>(edges[i].second), std::move(lbl));
    }
    if (labels) builder.node_labels(std::move(*labels));
    builder.class_label(cls);
    stats += builder.stats();
    graphs.push_back(builder.build(graphs.size()));
  }
  if (graphs.empty()) throw FormatError(file.string() + ": no records");
  return GraphCorpus(file.stem().string(), std::move(graphs), stats);
}

/// Writes the corpus in the JSON-lines format read by parse_jsonl_dataset.
inline void write_jsonl(const GraphCorpus& corpus, std::ostream& out) {
  using nlohmann::json;
  for (const auto& g : corpus) {
    json edges = json::array();
    json edge_labels = json::array();
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto& nbrs = g.neighbors(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        if (u < nbrs[k]) {
          edges.push_back({u, nbrs[k]});
          if (g.has_edge_labels()) edge_labels.push_back(g.edge_label_at(u, k));
        }
      }
    }
    json record = {{"edges", std::move(edges)}, {"node_labels", g.node_labels()}};
    if (g.has_edge_labels()) record["edge_labels"] = std::move(edge_labels);
    if (g.class_label()) record["class"] = *g.class_label();
    out << record.dump() << '\n';
  }
}

}  // namespace graphvec

#endif  // GRAPHVEC_DATASET_HPP_

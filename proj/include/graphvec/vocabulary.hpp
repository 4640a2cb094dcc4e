#ifndef GRAPHVEC_VOCABULARY_HPP_
#define GRAPHVEC_VOCABULARY_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/graph.hpp"
#include "graphvec/wl.hpp"

namespace graphvec {

using TokenId = std::uint32_t;

struct SubgraphToken {
  TokenId id = 0;
  std::string canonical;
  int degree = 0;
  std::uint64_t frequency = 0;

  friend bool operator==(const SubgraphToken&, const SubgraphToken&) = default;
};

/// Rooted-subgraph vocabulary of a corpus together with the WL dictionary
/// needed to tokenize further graphs consistently.
class Vocabulary {
 public:
  Vocabulary(std::vector<SubgraphToken> tokens, WlRelabeler relabeler, int max_degree, std::uint64_t min_count,
             WlOptions options)
      : tokens_(std::move(tokens)),
        relabeler_(std::move(relabeler)),
        max_degree_(max_degree),
        min_count_(min_count),
        options_(options) {
    if (tokens_.empty()) throw VocabularyError("vocabulary is empty");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (tokens_[i].id != i) throw VocabularyError("token ids must be dense and ordered");
      if (!index_.try_emplace(tokens_[i].canonical, tokens_[i].id).second) {
        throw VocabularyError("duplicate token " + tokens_[i].canonical);
      }
      total_ += tokens_[i].frequency;
    }
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  const SubgraphToken& operator[](TokenId id) const { return tokens_.at(id); }
  const std::vector<SubgraphToken>& tokens() const noexcept { return tokens_; }
  std::optional<TokenId> find(const std::string& canonical) const {
    const auto it = index_.find(canonical);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::uint64_t total_occurrences() const noexcept { return total_; }
  int max_degree() const noexcept { return max_degree_; }
  std::uint64_t min_count() const noexcept { return min_count_; }
  const WlOptions& options() const noexcept { return options_; }
  const WlRelabeler& relabeler() const noexcept { return relabeler_; }

 private:
  std::vector<SubgraphToken> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  WlRelabeler relabeler_;
  int max_degree_;
  std::uint64_t min_count_;
  WlOptions options_;
  std::uint64_t total_ = 0;
};

/// A graph viewed as the multiset of its rooted-subgraph tokens, ordered by
/// node then degree.
struct GraphDocument {
  std::size_t graph_id = 0;
  std::vector<TokenId> token_ids;

  friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

/// Collects every (graph, node, d) token of the corpus, drops those seen
/// fewer than `min_count` times and numbers the rest in first-occurrence order.
inline Vocabulary build_vocabulary(const GraphCorpus& corpus, int max_degree, std::uint64_t min_count = 1,
                                   const WlOptions& options = {}) {
  if (max_degree < 0) throw ArgumentError("max degree must be >= 0");
  if (min_count < 1) throw ArgumentError("min_count must be >= 1");

  struct Entry {
    std::string canonical;
    int degree;
    std::uint64_t count;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::string, std::size_t> position;
  WlRelabeler relabeler;
  const auto stride = static_cast<std::size_t>(max_degree) + 1;

  for (const auto& graph : corpus) {
    auto tokens = extract_all_tokens(graph, max_degree, relabeler, options);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto [it, inserted] = position.try_emplace(tokens[i], entries.size());
      if (inserted) {
        entries.push_back({std::move(tokens[i]), static_cast<int>(i % stride), 0});
      }
      ++entries[it->second].count;
    }
  }

  std::vector<SubgraphToken> kept;
  for (auto& e : entries) {
    if (e.count >= min_count) {
      kept.push_back({static_cast<TokenId>(kept.size()), std::move(e.canonical), e.degree, e.count});
    }
  }
  if (kept.empty()) {
    throw VocabularyError("no subgraph occurs at least " + std::to_string(min_count) + " times");
  }
  return Vocabulary(std::move(kept), std::move(relabeler), max_degree, min_count, options);
}

/// Tokenizes one graph against an existing vocabulary; out-of-vocabulary
/// tokens are skipped. `relabeler` should start as a copy of the
/// vocabulary's dictionary and may be reused across calls.
inline GraphDocument graph_to_document(const Graph& graph, const Vocabulary& vocab, int max_degree,
                                       WlRelabeler& relabeler) {
  GraphDocument doc{graph.graph_id(), {}};
  const auto tokens = extract_all_tokens(graph, max_degree, relabeler, vocab.options());
  doc.token_ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (const auto id = vocab.find(t)) doc.token_ids.push_back(*id);
  }
  return doc;
}

inline std::vector<GraphDocument> corpus_to_documents(const GraphCorpus& corpus, const Vocabulary& vocab,
                                                      int max_degree) {
  WlRelabeler relabeler = vocab.relabeler();
  std::vector<GraphDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& graph : corpus) docs.push_back(graph_to_document(graph, vocab, max_degree, relabeler));
  return docs;
}

/// `token_id \t frequency \t degree \t canonical_string`, one row per token.
inline void write_vocabulary_tsv(const Vocabulary& vocab, std::ostream& out) {
  for (const auto& t : vocab.tokens()) {
    out << t.id << '\t' << t.frequency << '\t' << t.degree << '\t' << t.canonical << '\n';
  }
}

}  // namespace graphvec

#endif  // GRAPHVEC_VOCABULARY_HPP_

#ifndef GRAPHVEC_HASH_HPP_
#define GRAPHVEC_HASH_HPP_

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "graphvec/graph.hpp"
#include "graphvec/vocabulary.hpp"

namespace graphvec {

/// 64-bit FNV-1a, fed incrementally.
class Fnv1a {
 public:
  Fnv1a& bytes(std::string_view s) {
    for (const unsigned char c : s) {
      state_ ^= c;
      state_ *= 0x100000001B3ULL;
    }
    return *this;
  }
  /// Length-prefixed so consecutive strings cannot run together.
  Fnv1a& str(std::string_view s) { return u64(s.size()).bytes(s); }
  Fnv1a& u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= static_cast<unsigned char>(v >> (8 * i));
      state_ *= 0x100000001B3ULL;
    }
    return *this;
  }
  std::uint64_t value() const noexcept { return state_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

 private:
  std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

/// Hash of everything a vocabulary depends on: corpus content (structure,
/// labels, classes), the WL settings and the resulting tokens.
inline std::string vocabulary_hash(const GraphCorpus& corpus, const Vocabulary& vocab) {
  Fnv1a h;
  h.u64(static_cast<std::uint64_t>(vocab.max_degree())).u64(vocab.min_count()).u64(vocab.options().use_edge_labels);
  h.u64(corpus.size());
  for (const auto& g : corpus) {
    h.u64(g.node_count());
    for (NodeId n = 0; n < g.node_count(); ++n) {
      h.str(g.node_label(n));
      h.u64(g.degree(n));
      for (const auto m : g.neighbors(n)) h.u64(m);
      if (g.has_edge_labels()) {
        for (std::size_t k = 0; k < g.degree(n); ++k) h.str(g.edge_label_at(n, k));
      }
    }
    h.u64(g.class_label().has_value());
    if (g.class_label()) h.u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(*g.class_label())));
  }
  h.u64(vocab.size());
  for (const auto& t : vocab.tokens()) h.str(t.canonical).u64(static_cast<std::uint64_t>(t.degree)).u64(t.frequency);
  return h.hex();
}

}  // namespace graphvec

#endif  // GRAPHVEC_HASH_HPP_

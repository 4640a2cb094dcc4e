#include <sstream>

#include <gtest/gtest.h>

#include "graphvec/dataset.hpp"
#include "graphvec/vocabulary.hpp"
#include "test_support.hpp"

namespace graphvec {
namespace {

GraphCorpus two_triangles() {
  return GraphCorpus("tri", {testing::triangle("A", 0), testing::triangle("A", 1)});
}

GraphCorpus mutag() { return parse_tu_dataset(std::filesystem::path(GRAPHVEC_DATA_DIR) / "MUTAG", "MUTAG"); }

TEST(BuildVocabulary, TwoIdenticalTriangles) {
  const auto vocab = build_vocabulary(two_triangles(), 1, 1);
  ASSERT_EQ(vocab.size(), 2u);
  EXPECT_EQ(vocab[0].canonical, "A");
  EXPECT_EQ(vocab[0].degree, 0);
  EXPECT_EQ(vocab[0].frequency, 6u);
  EXPECT_EQ(vocab[1].degree, 1);
  EXPECT_EQ(vocab[1].frequency, 6u);
  EXPECT_EQ(vocab.total_occurrences(), 12u);
}

TEST(BuildVocabulary, MinCountAboveEveryFrequency) {
  EXPECT_NO_THROW(build_vocabulary(two_triangles(), 1, 6));
  EXPECT_THROW(build_vocabulary(two_triangles(), 1, 7), VocabularyError);
  EXPECT_THROW(build_vocabulary(two_triangles(), 1, 0), ArgumentError);
}

TEST(BuildVocabulary, MutagDegreeZeroHasSevenLabels) {
  EXPECT_EQ(build_vocabulary(mutag(), 0).size(), 7u);
}

TEST(BuildVocabulary, FirstOccurrenceOrderAndBijection) {
  const auto corpus = mutag();
  const auto vocab = build_vocabulary(corpus, 2);
  for (const auto& t : vocab.tokens()) {
    EXPECT_EQ(vocab.find(t.canonical), t.id);
    EXPECT_GE(t.frequency, 1u);
  }
  // The first graph's first node contributes tokens 0..2 in degree order.
  EXPECT_EQ(vocab[0].degree, 0);
  EXPECT_EQ(vocab[1].degree, 1);
  EXPECT_EQ(vocab[2].degree, 2);
  std::uint64_t nodes = 0;
  for (const auto& g : corpus) nodes += g.node_count();
  EXPECT_EQ(vocab.total_occurrences(), nodes * 3);
}

TEST(BuildVocabulary, FrequenciesNeverDecreaseWhenGraphsAreAdded) {
  Rng rng(41);
  std::vector<Graph> graphs;
  std::map<std::string, std::uint64_t> previous;
  for (std::size_t i = 0; i < 30; ++i) {
    graphs.push_back(testing::random_graph(rng, 2, 7, 0.4, 2, i));
    const auto vocab = build_vocabulary(GraphCorpus("grow", graphs), 2);
    // Compressed names can shift as the dictionary grows, so compare through
    // recursive canonical strings.
    std::map<std::string, std::uint64_t> current;
    for (const auto& g : graphs) {
      for (NodeId n = 0; n < g.node_count(); ++n) {
        for (int d = 0; d <= 2; ++d) ++current[get_wl_subgraph(n, g, d)];
      }
    }
    for (const auto& [token, count] : previous) EXPECT_GE(current[token], count);
    std::uint64_t total = 0;
    for (const auto& [_, c] : current) total += c;
    EXPECT_EQ(vocab.total_occurrences(), total);
    previous = std::move(current);
  }
}

TEST(CorpusToDocuments, LengthAndDeterminism) {
  const auto corpus = GraphCorpus("mix", {testing::triangle("A", 0), testing::triangle("A", 1),
                                          testing::path3().with_graph_id(2)});
  const auto vocab = build_vocabulary(corpus, 2);
  const auto docs = corpus_to_documents(corpus, vocab, 2);
  ASSERT_EQ(docs.size(), 3u);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(docs[i].graph_id, i);
    EXPECT_EQ(docs[i].token_ids.size(), corpus[i].node_count() * 3);
  }
  EXPECT_EQ(docs[0].token_ids, docs[1].token_ids);
  EXPECT_EQ(corpus_to_documents(corpus, vocab, 2), docs);
}

TEST(CorpusToDocuments, PermutedCopyHasSameMultiset) {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing::random_graph(rng, 3, 6, 0.5, 3, 0);
    std::vector<Graph> graphs{g};
    const auto perms = testing::all_permutations(g.node_count());
    for (std::size_t p = 0; p < perms.size(); p += 7) {
      graphs.push_back(testing::permute(g, perms[p]).with_graph_id(graphs.size()));
    }
    const GraphCorpus corpus("perm", graphs);
    const auto vocab = build_vocabulary(corpus, 3);
    auto docs = corpus_to_documents(corpus, vocab, 3);
    for (auto& d : docs) std::sort(d.token_ids.begin(), d.token_ids.end());
    for (std::size_t i = 1; i < docs.size(); ++i) EXPECT_EQ(docs[i].token_ids, docs[0].token_ids);
  }
}

TEST(CorpusToDocuments, DropsTokensBelowMinCount) {
  const auto corpus = GraphCorpus("mix", {testing::triangle("A", 0), testing::triangle("A", 1),
                                          testing::path3().with_graph_id(2)});
  const auto vocab = build_vocabulary(corpus, 1, 2);
  EXPECT_EQ(vocab.size(), 2u);
  const auto docs = corpus_to_documents(corpus, vocab, 1);
  EXPECT_EQ(docs[0].token_ids.size(), 6u);
  // Only the path's "A" node survives, as a degree-0 token.
  EXPECT_EQ(docs[2].token_ids, (std::vector<TokenId>{0}));
}

TEST(CorpusToDocuments, UnseenGraphUsesKnownTokensOnly) {
  const auto corpus = GraphCorpus("tri", {testing::triangle("A", 0)});
  const auto vocab = build_vocabulary(corpus, 1);
  WlRelabeler relabeler = vocab.relabeler();
  // A path of A's: the end nodes' degree-1 shape is unseen, the center
  // matches the triangle's (one A with two A neighbors).
  const auto doc = graph_to_document(testing::path3("A", "A", "A"), vocab, 1, relabeler);
  EXPECT_EQ(doc.token_ids, (std::vector<TokenId>{0, 0, 1, 0}));
  const auto tri = graph_to_document(testing::triangle("A"), vocab, 1, relabeler);
  EXPECT_EQ(tri.token_ids, (std::vector<TokenId>{0, 1, 0, 1, 0, 1}));
}

TEST(VocabularyTsv, Format) {
  std::ostringstream out;
  write_vocabulary_tsv(build_vocabulary(two_triangles(), 1), out);
  EXPECT_EQ(out.str(), "0\t6\t0\tA\n1\t6\t1\t#0(#0,#0)\n");
}

}  // namespace
}  // namespace graphvec

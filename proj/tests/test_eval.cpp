#include <cmath>

#include <gtest/gtest.h>

#include "graphvec/dataset.hpp"
#include "graphvec/eval/ari.hpp"
#include "graphvec/eval/classify.hpp"
#include "graphvec/eval/kmeans.hpp"
#include "graphvec/eval/neighbors.hpp"
#include "graphvec/eval/wl_features.hpp"
#include "graphvec/vocabulary.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace graphvec {
namespace {

double ari(const std::vector<int>& a, const std::vector<int>& b) { return adjusted_rand_index(a, b); }

TEST(Ari, HandComputedValues) {
  EXPECT_DOUBLE_EQ(ari({0, 0, 1, 1}, {0, 1, 0, 1}), -0.5);
  EXPECT_DOUBLE_EQ(ari({0, 0, 0, 0}, {0, 1, 0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(ari({0, 0, 1, 1}, {5, 5, 9, 9}), 1.0);
  EXPECT_DOUBLE_EQ(ari({0, 0, 0}, {1, 1, 1}), 1.0);
}

TEST(Ari, RejectsBadInput) {
  EXPECT_THROW(ari({0}, {0}), ArgumentError);
  EXPECT_THROW(ari({0, 1}, {0, 1, 2}), ArgumentError);
}

TEST(Ari, MatchesPairCountingOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(2 + rng.below(11));
    const auto p = testing::random_partition(rng, n, 5);
    const auto q = testing::random_partition(rng, n, 5);
    EXPECT_EQ(ari(p, q), testing::brute_force_ari(p, q));
    EXPECT_EQ(ari(p, q), ari(q, p));
    EXPECT_EQ(ari(p, p), 1.0);
    auto relabeled = p;
    for (auto& x : relabeled) x = 100 - 7 * x;
    EXPECT_EQ(ari(relabeled, q), ari(p, q));
  }
}

Matrix blobs(Rng& rng, int per_blob, const std::vector<std::vector<double>>& centers, std::vector<int>& truth) {
  Matrix m(per_blob * centers.size(), centers[0].size());
  std::size_t r = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < per_blob; ++i, ++r) {
      for (std::size_t d = 0; d < centers[c].size(); ++d) m.row(r)[d] = centers[c][d] + rng.uniform(-0.5, 0.5);
      truth.push_back(static_cast<int>(c));
    }
  }
  return m;
}

TEST(KMeans, SeparatesBlobs) {
  Rng rng(4);
  std::vector<int> truth;
  const auto points = blobs(rng, 20, {{0, 0}, {10, 0}, {0, 10}}, truth);
  const auto result = kmeans(points, 3, 1);
  EXPECT_EQ(ari(result.assignments, truth), 1.0);
  EXPECT_EQ(result.k, 3);
  EXPECT_GT(result.inertia, 0.0);
}

TEST(KMeans, DeterministicAndMonotone) {
  Rng rng(5);
  Matrix points(60, 3);
  for (auto& v : points.data()) v = rng.uniform(-1, 1);
  const auto a = kmeans(points, 4, 9);
  const auto b = kmeans(points, 4, 9);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.inertia, b.inertia);
  ASSERT_FALSE(a.inertia_history.empty());
  for (std::size_t i = 1; i < a.inertia_history.size(); ++i) {
    EXPECT_LE(a.inertia_history[i], a.inertia_history[i - 1] + 1e-12);
  }
  for (const int c : a.assignments) {
    EXPECT_GE(c, 0);
    EXPECT_LT(c, 4);
  }
}

TEST(KMeans, OneClusterPerPoint) {
  Rng rng(6);
  Matrix points(7, 2);
  for (auto& v : points.data()) v = rng.uniform(-1, 1);
  const auto r = kmeans(points, 7, 3);
  EXPECT_EQ(r.inertia, 0.0);
  std::vector<int> sorted = r.assignments;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_THROW(kmeans(points, 8, 3), ArgumentError);
  EXPECT_THROW(kmeans(points, 0, 3), ArgumentError);
}

TEST(Neighbors, CosineBasics) {
  const std::vector<double> a{1, 2, 3}, b{-2, 1, 0}, z{0, 0, 0};
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-15);
  EXPECT_EQ(cosine(a, b), 0.0);
  EXPECT_EQ(cosine(a, z), 0.0);
  const std::vector<double> c{2, 4, 6};
  EXPECT_NEAR(cosine(a, c), 1.0, 1e-15);
}

TEST(Neighbors, OrderingAndTies) {
  Matrix m(5, 2);
  const double rows[5][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 3}};
  for (std::size_t r = 0; r < 5; ++r) {
    m.row(r)[0] = rows[r][0];
    m.row(r)[1] = rows[r][1];
  }
  const auto nn = nearest_neighbors(m, 0, 4);
  ASSERT_EQ(nn.size(), 4u);
  EXPECT_EQ(nn[0].graph_id, 3u);
  EXPECT_NEAR(nn[0].cosine, 1.0, 1e-15);
  EXPECT_EQ(nn[1].graph_id, 2u);
  EXPECT_NEAR(nn[1].cosine, std::sqrt(0.5), 1e-15);
  // Graphs 1 and 4 tie at 0; lower id first.
  EXPECT_EQ(nn[2].graph_id, 1u);
  EXPECT_EQ(nn[3].graph_id, 4u);
  EXPECT_THROW(nearest_neighbors(m, 0, 5), ArgumentError);
  EXPECT_THROW(nearest_neighbors(m, 0, 0), ArgumentError);
  EXPECT_THROW(nearest_neighbors(m, 5, 1), ArgumentError);
}

TEST(WlFeatures, RowsCountTokens) {
  auto [corpus, pairs] = testing::toy_corpus_with_duplicates();
  const auto vocab = build_vocabulary(corpus, 2);
  const auto docs = corpus_to_documents(corpus, vocab, 2);
  const auto f = wl_feature_vectors(docs, vocab);
  EXPECT_EQ(f.cols, vocab.size());
  ASSERT_EQ(f.rows.size(), corpus.size());
  for (std::size_t g = 0; g < corpus.size(); ++g) EXPECT_EQ(f.row_sum(g), corpus[g].node_count() * 3);
  for (const auto& [a, b] : pairs) EXPECT_EQ(f.rows[a], f.rows[b]);
  for (std::size_t a = 0; a < docs.size(); ++a) {
    for (std::size_t b = 0; b < docs.size(); ++b) {
      auto da = docs[a].token_ids, db = docs[b].token_ids;
      std::sort(da.begin(), da.end());
      std::sort(db.begin(), db.end());
      EXPECT_EQ(f.rows[a] == f.rows[b], da == db);
    }
  }
  const auto dense = f.to_dense();
  EXPECT_EQ(dense.rows(), corpus.size());
  double total = 0;
  for (const double v : dense.row(4)) total += v;
  EXPECT_EQ(total, static_cast<double>(f.row_sum(4)));
}

TEST(WlFeatures, MutagDegreeZeroHasSevenColumns) {
  const auto corpus = parse_tu_dataset(std::filesystem::path(GRAPHVEC_DATA_DIR) / "MUTAG", "MUTAG");
  const auto vocab = build_vocabulary(corpus, 0);
  const auto f = wl_feature_vectors(corpus_to_documents(corpus, vocab, 0), vocab);
  EXPECT_EQ(f.cols, 7u);
}

TEST(StratifiedSplit, KeepsClassProportions) {
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) labels.push_back(0);
  for (int i = 0; i < 10; ++i) labels.push_back(1);
  labels.push_back(2);
  Rng rng(1);
  const auto s = stratified_split(labels, 0.9, rng);
  int train0 = 0, train1 = 0, train2 = 0;
  for (const auto r : s.train) {
    train0 += labels[r] == 0;
    train1 += labels[r] == 1;
    train2 += labels[r] == 2;
  }
  EXPECT_EQ(train0, 27);
  EXPECT_EQ(train1, 9);
  EXPECT_EQ(train2, 1);
  EXPECT_EQ(s.train.size() + s.test.size(), labels.size());
  EXPECT_THROW(stratified_split(labels, 1.0, rng), ArgumentError);
}

TEST(Classify, SeparableDataIsPerfect) {
  Rng rng(2);
  std::vector<int> labels;
  const auto x = blobs(rng, 30, {{0, 0, 0}, {8, 8, 8}}, labels);
  const auto report = classify(x, labels, {0.9, 5, 3});
  EXPECT_EQ(report.mean, 1.0);
  EXPECT_EQ(report.std, 0.0);
  EXPECT_EQ(report.accuracies.size(), 5u);
}

TEST(Classify, MultiClass) {
  Rng rng(3);
  std::vector<int> labels;
  const auto x = blobs(rng, 20, {{0, 0}, {6, 0}, {0, 6}}, labels);
  EXPECT_EQ(classify(x, labels, {0.8, 3, 1}).mean, 1.0);
}

TEST(Classify, ShuffledLabelsScoreNearPrior) {
  Rng rng(4);
  Matrix x(40, 4);
  for (auto& v : x.data()) v = rng.uniform(-1, 1);
  std::vector<int> labels(40);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i < 20 ? 0 : 1;
  double total = 0;
  const int shuffles = 100;
  for (int s = 0; s < shuffles; ++s) {
    rng.shuffle(std::span<int>(labels));
    total += classify(x, labels, {0.5, 1, static_cast<std::uint64_t>(s)}).mean;
  }
  EXPECT_NEAR(total / shuffles, 0.5, 0.05);
}

TEST(Classify, WeakRegularizationFitsTrainingSetBetter) {
  Rng rng(5);
  Matrix x(60, 5);
  for (auto& v : x.data()) v = rng.uniform(-1, 1);
  std::vector<int> labels(60);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = (x.row(i)[0] + 0.7 * rng.uniform(-1, 1)) > 0;
  std::vector<std::size_t> all(60);
  std::iota(all.begin(), all.end(), std::size_t{0});
  LogisticClassifier weak, strong;
  weak.fit(x, all, labels, 0.0, 500);
  strong.fit(x, all, labels, 10.0, 500);
  EXPECT_GE(weak.accuracy(x, all, labels), strong.accuracy(x, all, labels));
}

TEST(Classify, Errors) {
  Matrix x(4, 2);
  const std::vector<int> one_class{1, 1, 1, 1};
  EXPECT_THROW(classify(x, one_class, {}), ArgumentError);
  const std::vector<int> singletons{0, 1, 2, 3};
  EXPECT_THROW(classify(x, singletons, {}), SplitError);
  const std::vector<int> short_labels{0, 1};
  EXPECT_THROW(classify(x, short_labels, {}), ArgumentError);
}

TEST(Classify, PopulationStd) {
  EXPECT_DOUBLE_EQ(detail::population_std({1, 3}, 2), 1.0);
  EXPECT_DOUBLE_EQ(detail::population_std({5}, 5), 0.0);
}

}  // namespace
}  // namespace graphvec

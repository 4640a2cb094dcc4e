#ifndef GRAPHVEC_EVAL_CLASSIFY_HPP_
#define GRAPHVEC_EVAL_CLASSIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/model.hpp"
#include "graphvec/rng.hpp"
#include "graphvec/trainer.hpp"

namespace graphvec {

struct SplitSpec {
  double train_fraction = 0.9;
  int repeats = 10;
  std::uint64_t seed = 1;
};

struct LogisticOptions {
  int iterations = 300;
  /// Candidate L2 strengths searched by cross-validation.
  std::vector<double> lambda_grid{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  int folds = 5;
};

struct ClassificationReport {
  double mean = 0;
  double std = 0;
  std::vector<double> accuracies;
  std::vector<double> chosen_lambdas;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-class split: round(fraction * count) members of each class go to
/// training, kept within [1, count - 1] when the class has at least 2 members.
inline Split stratified_split(std::span<const int> labels, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0 && train_fraction < 1)) throw ArgumentError("train_fraction must be in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Split split;
  for (auto& [_, members] : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, members.size() > 1 ? members.size() - 1 : 1);
    split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

/// L2-regularized logistic regression, one-vs-rest for more than two classes.
///
/// Features are standardized with statistics of the training rows. Each
/// binary problem minimizes mean log-loss + lambda/2 |w|^2 (intercept
/// unpenalized) by Nesterov-accelerated full-batch gradient descent with a
/// fixed step 1/L, so fitting is deterministic.
class LogisticClassifier {
 public:
  void fit(const Matrix& x, std::span<const std::size_t> rows, std::span<const int> labels, double lambda,
           int iterations = 300) {
    if (rows.empty()) throw ArgumentError("no training rows");
    if (!(lambda >= 0)) throw ArgumentError("lambda must be >= 0");
    const std::size_t dim = x.cols();
    classes_.clear();
    for (const auto r : rows) classes_.push_back(labels[r]);
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());

    mean_.assign(dim, 0.0);
    scale_.assign(dim, 1.0);
    for (const auto r : rows) {
      const auto v = x.row(r);
      for (std::size_t i = 0; i < dim; ++i) mean_[i] += v[i];
    }
    for (auto& m : mean_) m /= static_cast<double>(rows.size());
    std::vector<double> var(dim, 0.0);
    for (const auto r : rows) {
      const auto v = x.row(r);
      for (std::size_t i = 0; i < dim; ++i) var[i] += (v[i] - mean_[i]) * (v[i] - mean_[i]);
    }
    for (std::size_t i = 0; i < dim; ++i) {
      const double sd = std::sqrt(var[i] / static_cast<double>(rows.size()));
      scale_[i] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }

    Matrix z(rows.size(), dim);
    for (std::size_t k = 0; k < rows.size(); ++k) standardize(x.row(rows[k]), z.row(k));
    const double step = 1.0 / (0.25 * (largest_gram_eigenvalue(z) / static_cast<double>(rows.size()) + 1.0) + lambda);

    weights_.clear();
    biases_.clear();
    if (classes_.size() == 1) return;
    const std::size_t n_models = classes_.size() == 2 ? 1 : classes_.size();
    std::vector<double> y(rows.size());
    for (std::size_t m = 0; m < n_models; ++m) {
      const int positive = classes_[classes_.size() == 2 ? 1 : m];
      for (std::size_t k = 0; k < rows.size(); ++k) y[k] = labels[rows[k]] == positive ? 1.0 : 0.0;
      fit_binary(z, y, lambda, step, iterations);
    }
  }

  int predict(std::span<const double> v) const {
    if (classes_.empty()) throw ArgumentError("classifier is not fitted");
    if (classes_.size() == 1) return classes_[0];
    std::vector<double> z(v.size());
    standardize(v, z);
    if (classes_.size() == 2) return decision(0, z) > 0 ? classes_[1] : classes_[0];
    std::size_t best = 0;
    double best_score = decision(0, z);
    for (std::size_t m = 1; m < weights_.size(); ++m) {
      const double s = decision(m, z);
      if (s > best_score) {
        best_score = s;
        best = m;
      }
    }
    return classes_[best];
  }

  double accuracy(const Matrix& x, std::span<const std::size_t> rows, std::span<const int> labels) const {
    if (rows.empty()) throw ArgumentError("no evaluation rows");
    std::size_t correct = 0;
    for (const auto r : rows) correct += predict(x.row(r)) == labels[r];
    return static_cast<double>(correct) / static_cast<double>(rows.size());
  }

 private:
  void standardize(std::span<const double> v, std::span<double> out) const {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean_[i]) * scale_[i];
  }

  double decision(std::size_t m, std::span<const double> z) const { return dot(weights_[m], z) + biases_[m]; }

  // Power iteration for the top eigenvalue of z^T z, started from all ones.
  static double largest_gram_eigenvalue(const Matrix& z) {
    const std::size_t dim = z.cols();
    std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim))), zv(z.rows()), next(dim);
    double lambda = 0;
    for (int it = 0; it < 50; ++it) {
      for (std::size_t r = 0; r < z.rows(); ++r) zv[r] = dot(z.row(r), v);
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t r = 0; r < z.rows(); ++r) {
        const auto row = z.row(r);
        for (std::size_t i = 0; i < dim; ++i) next[i] += zv[r] * row[i];
      }
      const double norm = std::sqrt(dot(next, next));
      if (norm == 0) return 0;
      lambda = norm;
      for (std::size_t i = 0; i < dim; ++i) v[i] = next[i] / norm;
    }
    // Power iteration approaches from below; pad so the step stays stable.
    return lambda * 1.05;
  }

  void fit_binary(const Matrix& z, std::span<const double> y, double lambda, double step, int iterations) {
    const std::size_t n = z.rows(), dim = z.cols();
    std::vector<double> w(dim, 0.0), w_prev(dim, 0.0), look(dim), grad(dim), residual(n);
    double b = 0, b_prev = 0;
    for (int it = 1; it <= iterations; ++it) {
      const double momentum = static_cast<double>(it - 1) / static_cast<double>(it + 2);
      for (std::size_t i = 0; i < dim; ++i) look[i] = w[i] + momentum * (w[i] - w_prev[i]);
      const double look_b = b + momentum * (b - b_prev);

      double grad_b = 0;
      for (std::size_t r = 0; r < n; ++r) {
        residual[r] = sigmoid(dot(z.row(r), look) + look_b) - y[r];
        grad_b += residual[r];
      }
      grad_b /= static_cast<double>(n);
      for (std::size_t i = 0; i < dim; ++i) grad[i] = lambda * look[i];
      for (std::size_t r = 0; r < n; ++r) {
        const double c = residual[r] / static_cast<double>(n);
        const auto row = z.row(r);
        for (std::size_t i = 0; i < dim; ++i) grad[i] += c * row[i];
      }
      w_prev = w;
      b_prev = b;
      for (std::size_t i = 0; i < dim; ++i) w[i] = look[i] - step * grad[i];
      b = look_b - step * grad_b;
    }
    weights_.push_back(std::move(w));
    biases_.push_back(b);
  }

  std::vector<int> classes_;
  std::vector<double> mean_, scale_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> biases_;
};

namespace detail {

/// Stratified fold index per training row: members of each class are dealt
/// round-robin after a shuffle.
inline std::vector<int> stratified_folds(std::span<const std::size_t> rows, std::span<const int> labels, int folds,
                                         Rng& rng) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t k = 0; k < rows.size(); ++k) by_class[labels[rows[k]]].push_back(k);
  std::vector<int> fold(rows.size());
  int next = 0;
  for (auto& [_, members] : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (const auto k : members) {
      fold[k] = next;
      next = (next + 1) % folds;
    }
  }
  return fold;
}

inline double population_std(const std::vector<double>& xs, double mean) {
  double s = 0;
  for (const double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace detail

/// Chooses lambda by stratified k-fold cross-validation on `train` rows only.
/// Ties go to the earlier (stronger) grid entry.
inline double select_lambda(const Matrix& x, std::span<const std::size_t> train, std::span<const int> labels,
                            const LogisticOptions& options, Rng& rng) {
  const int folds = std::max(2, std::min<int>(options.folds, static_cast<int>(train.size())));
  const auto fold = detail::stratified_folds(train, labels, folds, rng);
  double best_lambda = options.lambda_grid.front();
  double best_acc = -1;
  for (const double lambda : options.lambda_grid) {
    double acc_sum = 0;
    int used = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<std::size_t> fit_rows, val_rows;
      for (std::size_t k = 0; k < train.size(); ++k) (fold[k] == f ? val_rows : fit_rows).push_back(train[k]);
      if (val_rows.empty() || fit_rows.empty()) continue;
      LogisticClassifier clf;
      clf.fit(x, fit_rows, labels, lambda, options.iterations);
      acc_sum += clf.accuracy(x, val_rows, labels);
      ++used;
    }
    const double acc = used ? acc_sum / used : 0.0;
    if (acc > best_acc) {
      best_acc = acc;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

/// Repeated stratified hold-out classification of row-aligned embeddings.
///
/// Each repeat draws a split, picks lambda by cross-validation on the
/// training part, refits on the whole training part and scores the test
/// part. A split whose training part misses a class, or whose test part is
/// empty, is redrawn up to 10 times before SplitError is thrown.
inline ClassificationReport classify(const Matrix& embeddings, std::span<const int> labels, const SplitSpec& split,
                                     const LogisticOptions& options = {}) {
  if (labels.size() != embeddings.rows()) throw ArgumentError("labels are not row-aligned with embeddings");
  if (split.repeats < 1) throw ArgumentError("repeats must be >= 1");
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw ArgumentError("classification needs at least 2 classes");

  constexpr int kMaxRedraws = 10;
  ClassificationReport report;
  Rng rng(derive_seed(split.seed, SeedStream::kSplit));
  for (int rep = 0; rep < split.repeats; ++rep) {
    Split s;
    for (int attempt = 0;; ++attempt) {
      s = stratified_split(labels, split.train_fraction, rng);
      std::vector<int> seen;
      for (const auto r : s.train) seen.push_back(labels[r]);
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      if (seen.size() == classes.size() && !s.test.empty()) break;
      if (attempt + 1 >= kMaxRedraws) throw SplitError("could not draw a split containing every class in training");
    }
    const double lambda = select_lambda(embeddings, s.train, labels, options, rng);
    LogisticClassifier clf;
    clf.fit(embeddings, s.train, labels, lambda, options.iterations);
    report.accuracies.push_back(clf.accuracy(embeddings, s.test, labels));
    report.chosen_lambdas.push_back(lambda);
  }
  report.mean = std::accumulate(report.accuracies.begin(), report.accuracies.end(), 0.0) /
                static_cast<double>(report.accuracies.size());
  report.std = detail::population_std(report.accuracies, report.mean);
  return report;
}

}  // namespace graphvec

#endif  // GRAPHVEC_EVAL_CLASSIFY_HPP_

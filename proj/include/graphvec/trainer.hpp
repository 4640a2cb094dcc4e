#ifndef GRAPHVEC_TRAINER_HPP_
#define GRAPHVEC_TRAINER_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/model.hpp"
#include "graphvec/rng.hpp"
#include "graphvec/sampler.hpp"
#include "graphvec/vocabulary.hpp"

namespace graphvec {

/// Dot products are clamped to this magnitude before the logistic function.
inline constexpr double kMaxLogit = 30.0;

/// Logistic function on a clamped argument, evaluated without overflow.
inline double sigmoid(double x) {
  x = std::clamp(x, -kMaxLogit, kMaxLogit);
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// -log(sigmoid(x)), stable for large |x|.
inline double neg_log_sigmoid(double x) {
  return std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace detail {

inline void check_finite(std::span<const double> v, const char* what) {
  for (const double x : v) {
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite value in ") + what);
  }
}

}  // namespace detail

/// Negative-sampling loss of one (graph, token) pair:
/// -log s(g.t) - sum_n log s(-g.n), with s the logistic function.
inline double ns_loss(std::span<const double> graph_vec, std::span<const double> target_vec,
                      const std::vector<std::span<const double>>& negative_vecs) {
  detail::check_finite(graph_vec, "graph vector");
  detail::check_finite(target_vec, "target vector");
  if (target_vec.size() != graph_vec.size()) throw ArgumentError("target dimension mismatch");
  double loss = neg_log_sigmoid(dot(graph_vec, target_vec));
  for (const auto& n : negative_vecs) {
    detail::check_finite(n, "negative vector");
    if (n.size() != graph_vec.size()) throw ArgumentError("negative dimension mismatch");
    loss += neg_log_sigmoid(-dot(graph_vec, n));
  }
  return loss;
}

/// Gradient of ns_loss with respect to each participating vector.
struct NsGradients {
  std::vector<double> graph;
  std::vector<double> target;
  std::vector<std::vector<double>> negatives;
};

inline NsGradients ns_gradients(std::span<const double> graph_vec, std::span<const double> target_vec,
                                const std::vector<std::span<const double>>& negative_vecs) {
  const std::size_t dim = graph_vec.size();
  NsGradients grad{std::vector<double>(dim, 0.0), std::vector<double>(dim), {}};
  // d/df of -log s(f) is -(1 - s(f)); of -log s(-f) is s(f).
  const double ct = -(1.0 - sigmoid(dot(graph_vec, target_vec)));
  for (std::size_t i = 0; i < dim; ++i) {
    grad.graph[i] += ct * target_vec[i];
    grad.target[i] = ct * graph_vec[i];
  }
  for (const auto& n : negative_vecs) {
    const double cn = sigmoid(dot(graph_vec, n));
    auto& gn = grad.negatives.emplace_back(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      grad.graph[i] += cn * n[i];
      gn[i] = cn * graph_vec[i];
    }
  }
  return grad;
}

/// Reusable buffers for train_pair.
struct PairWorkspace {
  std::vector<double> graph_step;
  std::vector<double> coefficients;
  std::vector<TokenId> negatives;
};

/// One SGD step on ns_loss for (graph_id, target) against the given
/// negatives. All gradients are taken at the pre-step point, so a token that
/// appears twice receives the sum of both contributions. Returns the
/// pre-step loss. Rows outside {graph_id, target, negatives} are untouched.
inline double train_pair(EmbeddingModel& model, std::size_t graph_id, TokenId target,
                         std::span<const TokenId> negatives, double lr, PairWorkspace& ws) {
  auto g = model.graph_vectors.row(graph_id);
  const std::size_t dim = g.size();
  ws.graph_step.assign(dim, 0.0);
  ws.coefficients.resize(negatives.size() + 1);

  double loss = 0;
  for (std::size_t j = 0; j <= negatives.size(); ++j) {
    const bool positive = j == 0;
    const auto t = model.token_vectors.row(positive ? target : negatives[j - 1]);
    const double f = dot(g, t);
    loss += positive ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
    // Negative gradient of the loss w.r.t. f.
    const double coef = (positive ? 1.0 : 0.0) - sigmoid(f);
    ws.coefficients[j] = coef;
    for (std::size_t i = 0; i < dim; ++i) ws.graph_step[i] += coef * t[i];
  }
  if (lr == 0) return loss;
  for (std::size_t j = 0; j <= negatives.size(); ++j) {
    auto t = model.token_vectors.row(j == 0 ? target : negatives[j - 1]);
    const double scale = lr * ws.coefficients[j];
    for (std::size_t i = 0; i < dim; ++i) t[i] += scale * g[i];
  }
  for (std::size_t i = 0; i < dim; ++i) g[i] += lr * ws.graph_step[i];
  return loss;
}

inline double train_pair(EmbeddingModel& model, std::size_t graph_id, TokenId target,
                         std::span<const TokenId> negatives, double lr) {
  PairWorkspace ws;
  return train_pair(model, graph_id, target, negatives, lr, ws);
}

/// Draws `k` negatives for `target`. A draw equal to the target (or, when
/// `document_mask` is given, present in the current document) is redrawn up
/// to 16 times and then accepted.
inline void draw_negatives(const NegativeSampler& sampler, Rng& rng, TokenId target, int k,
                           const std::vector<char>* document_mask, std::vector<TokenId>& out) {
  constexpr int kMaxRedraws = 16;
  out.clear();
  for (int i = 0; i < k; ++i) {
    TokenId n = sampler.sample(rng);
    for (int r = 0; r < kMaxRedraws; ++r) {
      const bool clash = document_mask ? (*document_mask)[n] != 0 : n == target;
      if (!clash) break;
      n = sampler.sample(rng);
    }
    out.push_back(n);
  }
}

/// Samples negatives from `sampler` and applies train_pair.
inline double train_pair(EmbeddingModel& model, std::size_t graph_id, TokenId target, const NegativeSampler& sampler,
                         Rng& rng, int negative_samples, double lr, PairWorkspace& ws) {
  draw_negatives(sampler, rng, target, negative_samples, nullptr, ws.negatives);
  return train_pair(model, graph_id, target, ws.negatives, lr, ws);
}

namespace detail {

/// Linear decay from lr0 to lr0 * 1e-4 over `total` steps.
inline double decayed_lr(double lr0, std::uint64_t step, std::uint64_t total) {
  constexpr double kFloor = 1e-4;
  const double progress = total == 0 ? 0.0 : std::min(1.0, static_cast<double>(step) / static_cast<double>(total));
  return lr0 * (1.0 - (1.0 - kFloor) * progress);
}

struct WorkerState {
  Rng rng;
  PairWorkspace ws;
  std::vector<char> mask;
  std::vector<TokenId> order;
  std::vector<TokenId> negatives;
};

inline void train_document(EmbeddingModel& model, const GraphDocument& doc, const NegativeSampler& sampler,
                           const TrainConfig& config, WorkerState& st, std::atomic<std::uint64_t>& step,
                           std::uint64_t total) {
  const bool exclude = config.exclude_document_negatives;
  if (exclude) {
    st.mask.assign(sampler.size(), 0);
    for (const auto t : doc.token_ids) st.mask[t] = 1;
  }
  st.order.assign(doc.token_ids.begin(), doc.token_ids.end());
  if (config.shuffle_tokens) st.rng.shuffle(std::span<TokenId>(st.order));

  for (const TokenId target : st.order) {
    const auto s = step.fetch_add(1, std::memory_order_relaxed);
    const double lr = decayed_lr(config.learning_rate, s, total);
    draw_negatives(sampler, st.rng, target, config.negative_samples, exclude ? &st.mask : nullptr, st.negatives);
    const double loss = train_pair(model, doc.graph_id, target, st.negatives, lr, st.ws);
    const auto g = model.graph_vectors.row(doc.graph_id);
    if (!std::isfinite(loss) || !std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); })) {
      throw NumericalError("non-finite loss or graph vector at step " + std::to_string(s) + " (graph " +
                               std::to_string(doc.graph_id) + ", token " + std::to_string(target) + ")",
                           s);
    }
  }
}

}  // namespace detail

/// Optional per-epoch hook: (epoch index, model).
using EpochCallback = std::function<void(int, const EmbeddingModel&)>;

/// Learns one vector per document with negative-sampling SGD.
///
/// Each epoch visits the graphs in a freshly shuffled order and makes one
/// train_pair step per document token. The learning rate decays linearly
/// over all steps. With workers > 1 the shuffled order is split into
/// contiguous chunks trained concurrently without locking; results are then
/// not reproducible. With one worker a fixed seed gives bit-identical output.
inline EmbeddingModel train(const std::vector<GraphDocument>& documents, const Vocabulary& vocab,
                            const TrainConfig& config, const EpochCallback& on_epoch = {}) {
  config.validate();
  if (documents.empty()) throw ArgumentError("no documents to train on");
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (documents[i].graph_id != i) throw ArgumentError("document " + std::to_string(i) + " has mismatched graph_id");
    for (const auto t : documents[i].token_ids) {
      if (t >= vocab.size()) throw ArgumentError("document " + std::to_string(i) + " references unknown token");
    }
  }

  EmbeddingModel model = init_model(documents.size(), vocab.size(), config);
  const NegativeSampler sampler(vocab, config.ns_exponent);

  std::uint64_t per_epoch = 0;
  for (const auto& d : documents) per_epoch += d.token_ids.size();
  const std::uint64_t total = per_epoch * static_cast<std::uint64_t>(config.epochs);

  const auto n_workers = static_cast<std::size_t>(config.workers);
  std::vector<detail::WorkerState> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.push_back({Rng(derive_seed(config.seed, SeedStream::kSampler, w)), {}, {}, {}, {}});
  }

  Rng shuffle_rng(derive_seed(config.seed, SeedStream::kShuffle));
  std::vector<std::size_t> order(documents.size());
  std::atomic<std::uint64_t> step{0};

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    if (n_workers == 1) {
      for (const auto g : order) detail::train_document(model, documents[g], sampler, config, workers[0], step, total);
    } else {
      std::exception_ptr failure;
      std::mutex failure_mutex;
      std::atomic<bool> stop{false};
      std::vector<std::jthread> threads;
      const std::size_t chunk = (order.size() + n_workers - 1) / n_workers;
      for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t lo = std::min(order.size(), w * chunk);
        const std::size_t hi = std::min(order.size(), lo + chunk);
        threads.emplace_back([&, w, lo, hi] {
          try {
            for (std::size_t i = lo; i < hi && !stop.load(std::memory_order_relaxed); ++i) {
              detail::train_document(model, documents[order[i]], sampler, config, workers[w], step, total);
            }
          } catch (...) {
            stop = true;
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        });
      }
      threads.clear();
      if (failure) std::rethrow_exception(failure);
    }
    if (on_epoch) on_epoch(epoch, model);
  }

  if (!model.all_finite()) throw NumericalError("model contains non-finite values after training", total);
  return model;
}

/// Embeds a graph that was not part of training: a fresh vector is trained
/// against the frozen token vectors for `config.epochs` passes over the
/// document. The model is not modified. Tokens outside the model are skipped.
inline std::vector<double> infer_new_graph(const EmbeddingModel& model, const GraphDocument& document,
                                           const Vocabulary& vocab, const TrainConfig& config) {
  TrainConfig checked = config;
  checked.learning_rate = 1;  // zero is allowed here and yields the initial vector
  checked.dimensions = model.dimensions();
  checked.validate();
  if (!(config.learning_rate >= 0)) throw ArgumentError("learning_rate must be >= 0");
  if (vocab.size() != model.token_vectors.rows()) throw ArgumentError("vocabulary does not match model");

  std::vector<TokenId> known;
  for (const auto t : document.token_ids) {
    if (t < model.token_vectors.rows()) known.push_back(t);
  }
  if (known.empty()) throw InferenceError("graph shares no subgraph token with the model vocabulary");

  const std::size_t dim = model.dimensions();
  std::vector<double> vec(dim);
  Rng rng(derive_seed(config.seed, SeedStream::kInfer, document.graph_id));
  init_graph_vector(vec, rng);

  const NegativeSampler sampler(vocab, config.ns_exponent);
  std::vector<char> mask;
  if (config.exclude_document_negatives) {
    mask.assign(vocab.size(), 0);
    for (const auto t : known) mask[t] = 1;
  }
  const std::uint64_t total = known.size() * static_cast<std::uint64_t>(config.epochs);
  std::uint64_t step = 0;
  std::vector<TokenId> negatives;
  std::vector<double> update(dim);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle_tokens) rng.shuffle(std::span<TokenId>(known));
    for (const TokenId target : known) {
      const double lr = detail::decayed_lr(config.learning_rate, step++, total);
      draw_negatives(sampler, rng, target, config.negative_samples, mask.empty() ? nullptr : &mask, negatives);
      std::fill(update.begin(), update.end(), 0.0);
      for (std::size_t j = 0; j <= negatives.size(); ++j) {
        const auto t = model.token_vectors.row(j == 0 ? target : negatives[j - 1]);
        const double coef = (j == 0 ? 1.0 : 0.0) - sigmoid(dot(vec, t));
        for (std::size_t i = 0; i < dim; ++i) update[i] += coef * t[i];
      }
      for (std::size_t i = 0; i < dim; ++i) vec[i] += lr * update[i];
    }
  }
  detail::check_finite(vec, "inferred vector");
  return vec;
}

}  // namespace graphvec

#endif  // GRAPHVEC_TRAINER_HPP_

#ifndef GRAPHVEC_SAMPLER_HPP_
#define GRAPHVEC_SAMPLER_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "graphvec/error.hpp"
#include "graphvec/rng.hpp"
#include "graphvec/vocabulary.hpp"

namespace graphvec {

/// Draws token ids with probability proportional to frequency^exponent.
///
/// Immutable after construction; callers supply their own Rng, so one
/// sampler can serve several workers.
class NegativeSampler {
 public:
  NegativeSampler(const Vocabulary& vocab, double exponent) {
    std::vector<double> weights;
    weights.reserve(vocab.size());
    for (const auto& t : vocab.tokens()) weights.push_back(static_cast<double>(t.frequency));
    *this = NegativeSampler(weights, exponent);
  }

  NegativeSampler(const std::vector<double>& frequencies, double exponent) {
    if (frequencies.empty()) throw ArgumentError("sampler needs at least one token");
    if (!(exponent >= 0) || !std::isfinite(exponent)) throw ArgumentError("sampler exponent must be >= 0");
    cdf_.reserve(frequencies.size());
    double total = 0;
    for (const double f : frequencies) {
      if (!(f > 0)) throw ArgumentError("token frequencies must be positive");
      total += std::pow(f, exponent);
      cdf_.push_back(total);
    }
    for (auto& c : cdf_) c /= total;
    cdf_.back() = 1.0;
  }

  std::size_t size() const noexcept { return cdf_.size(); }

  double probability(TokenId id) const {
    const auto i = static_cast<std::size_t>(id);
    if (i >= cdf_.size()) throw ArgumentError("token id out of range");
    return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
  }

  TokenId sample(Rng& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    return static_cast<TokenId>(i);
  }

 private:
  NegativeSampler() = default;
  std::vector<double> cdf_;
};

}  // namespace graphvec

#endif  // GRAPHVEC_SAMPLER_HPP_

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "twsent/rng.hpp"
#include "twsent/vocab.hpp"

namespace twsent {

// Noise distribution for negative sampling: P(w) proportional to
// count(w)^power. Sampling is an inverse-CDF lookup, which keeps the draw
// exact for the chi-squared distribution test instead of quantized the way
// the classic 1e8-slot table is.
class NegativeTable {
 public:
  explicit NegativeTable(const Vocabulary& vocab, double power = 0.75) {
    if (vocab.size() == 0) throw std::invalid_argument("sampler: empty vocabulary");
    cdf_.resize(vocab.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      acc += std::pow(static_cast<double>(vocab.entry(i).count), power);
      cdf_[i] = acc;
    }
    total_ = acc;
  }

  std::size_t sample(Rng& rng) const {
    double u = rng.next_double() * total_;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::size_t>(it - cdf_.begin());
  }

  double probability(std::size_t idx) const {
    double prev = idx == 0 ? 0.0 : cdf_[idx - 1];
    return (cdf_[idx] - prev) / total_;
  }

 private:
  std::vector<double> cdf_;
  double total_ = 0.0;
};

// word2vec frequent-token downsampling. t == 0 disables (keep everything);
// otherwise keep probability is min(1, sqrt(t/f) + t/f) for corpus
// frequency f.
inline double keep_probability(double frequency, double threshold) {
  if (threshold <= 0.0) return 1.0;
  double r = threshold / frequency;
  return std::min(1.0, std::sqrt(r) + r);
}

}  // namespace twsent

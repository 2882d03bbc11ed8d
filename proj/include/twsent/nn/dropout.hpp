#pragma once

#include <stdexcept>
#include <vector>

#include "twsent/nn/core.hpp"
#include "twsent/rng.hpp"

namespace twsent::nn {

// Inverted dropout: survivors are scaled by 1/(1-rate) at train time so the
// eval-mode forward is the identity.
template <typename S>
struct Dropout {
  double rate = 0.0;
  Mat<S> mask;

  explicit Dropout(double r = 0.0) : rate(r) {
    if (r < 0.0 || r >= 1.0) throw std::invalid_argument("dropout: rate must be in [0,1)");
  }

  Mat<S> forward(const Mat<S>& x, bool train, twsent::Rng& rng) {
    if (!train || rate == 0.0) {
      mask.resize(0, 0);
      return x;
    }
    const S scale = static_cast<S>(1.0 / (1.0 - rate));
    mask.resize(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < mask.size(); ++i)
      mask.data()[i] = rng.next_double() < rate ? S(0) : scale;
    return x.cwiseProduct(mask);
  }

  Mat<S> backward(const Mat<S>& dy) const {
    if (mask.size() == 0) return dy;
    return dy.cwiseProduct(mask);
  }
};

// Vector form of the same thing, for callers outside a layer stack.
template <typename S>
std::vector<S> dropout(const std::vector<S>& x, double rate, bool train, std::uint64_t seed) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate must be in [0,1)");
  if (!train || rate == 0.0) return x;
  twsent::Rng rng(seed);
  std::vector<S> out(x.size());
  const S scale = static_cast<S>(1.0 / (1.0 - rate));
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = rng.next_double() < rate ? S(0) : x[i] * scale;
  return out;
}

}  // namespace twsent::nn

#pragma once

#include <algorithm>
#include <cmath>

#include "twsent/nn/core.hpp"

namespace twsent::nn {

// Binary cross-entropy on a predicted probability. The probability is
// clamped to [eps, 1-eps] so the loss and its gradient stay finite.
template <typename S>
struct BceResult {
  S loss;
  S dp;  // dL/dp
};

template <typename S>
BceResult<S> bce_loss(S p, int y) {
  const S eps = S(1e-7);
  const S pc = std::min(S(1) - eps, std::max(eps, p));
  const S loss = y ? -std::log(pc) : -std::log(S(1) - pc);
  const S dp = y ? -S(1) / pc : S(1) / (S(1) - pc);
  return {loss, dp};
}

// Mean BCE over a batch column of probabilities. dL/dp is already divided
// by the batch size.
template <typename S>
S bce_loss_batch(const Mat<S>& p, const std::vector<int>& labels, Mat<S>& dp) {
  const Eigen::Index n = p.rows();
  dp.resize(n, 1);
  S total = S(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const BceResult<S> r = bce_loss(p(i, 0), labels[static_cast<std::size_t>(i)]);
    total += r.loss;
    dp(i, 0) = r.dp / static_cast<S>(n);
  }
  return total / static_cast<S>(n);
}

}  // namespace twsent::nn

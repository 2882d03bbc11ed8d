#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "twsent/nn/core.hpp"

namespace twsent::nn {

// Bias-corrected Adam over a ParamList. Moment buffers mirror parameter
// shapes in declaration order.
template <typename S>
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<std::vector<S>> m, v;

  void init(const ParamList<S>& params) {
    m.clear();
    v.clear();
    for (const auto& t : params.tensors) {
      m.emplace_back(t.size, S(0));
      v.emplace_back(t.size, S(0));
    }
    step = 0;
  }

  void update(ParamList<S>& params) {
    if (m.size() != params.tensors.size()) throw std::invalid_argument("adam: state mismatch");
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t ti = 0; ti < params.tensors.size(); ++ti) {
      TensorRef<S>& t = params.tensors[ti];
      if (m[ti].size() != t.size) throw std::invalid_argument("adam: shape mismatch");
      S* mi = m[ti].data();
      S* vi = v[ti].data();
      for (std::size_t i = 0; i < t.size; ++i) {
        const double g = static_cast<double>(t.grad[i]);
        const double nm = beta1 * mi[i] + (1.0 - beta1) * g;
        const double nv = beta2 * vi[i] + (1.0 - beta2) * g * g;
        mi[i] = static_cast<S>(nm);
        vi[i] = static_cast<S>(nv);
        t.data[i] -= static_cast<S>(lr * (nm / bc1) / (std::sqrt(nv / bc2) + eps));
      }
    }
  }
};

}  // namespace twsent::nn

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "twsent/nn/core.hpp"

namespace twsent::nn {

struct GradCheckReport {
  bool pass = false;
  double max_rel_err = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
};

// Central finite differences at step h against the analytic gradients held
// in the ParamList. The caller runs forward+backward first so the grads are
// populated; loss_fn must recompute the loss from the current parameter
// values without touching the grads.
//
// rel err = |analytic - numeric| / max(|analytic| + |numeric|, floor); the
// floor keeps exactly-zero coordinates from dividing by zero.
template <typename LossFn>
GradCheckReport grad_check(ParamList<double>& params, LossFn&& loss_fn, double tol = 1e-4,
                           double h = 1e-5) {
  GradCheckReport rep;
  for (auto& t : params.tensors) {
    for (std::size_t i = 0; i < t.size; ++i) {
      const double saved = t.data[i];
      t.data[i] = saved + h;
      const double lp = loss_fn();
      t.data[i] = saved - h;
      const double lm = loss_fn();
      t.data[i] = saved;
      const double numeric = (lp - lm) / (2.0 * h);
      const double analytic = t.grad[i];
      const double denom = std::max(std::abs(analytic) + std::abs(numeric), 1e-4);
      const double rel = std::abs(analytic - numeric) / denom;
      if (rel > rep.max_rel_err) {
        rep.max_rel_err = rel;
        rep.worst_tensor = t.name;
        rep.worst_index = i;
      }
    }
  }
  rep.pass = rep.max_rel_err < tol;
  return rep;
}

}  // namespace twsent::nn

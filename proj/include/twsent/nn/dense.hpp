#pragma once

#include "twsent/nn/core.hpp"
#include "twsent/rng.hpp"

namespace twsent::nn {

// Fully connected layer, batch rows: Y = act(X W^T + b).
template <typename S>
struct Dense {
  Mat<S> W;  // out x in
  Vec<S> b;  // out
  Activation act = Activation::linear;

  Mat<S> dW;
  Vec<S> db;

  Mat<S> x_cache;  // batch x in
  Mat<S> y_cache;  // batch x out

  Dense() = default;
  Dense(int in, int out, Activation a, twsent::Rng& rng) : act(a) {
    W.resize(out, in);
    b = Vec<S>::Zero(out);
    // Glorot-uniform
    const double limit = std::sqrt(6.0 / (in + out));
    for (Eigen::Index i = 0; i < W.size(); ++i)
      W.data()[i] = static_cast<S>((rng.next_double() * 2.0 - 1.0) * limit);
    dW = Mat<S>::Zero(out, in);
    db = Vec<S>::Zero(out);
  }

  int in_dim() const { return static_cast<int>(W.cols()); }
  int out_dim() const { return static_cast<int>(W.rows()); }

  const Mat<S>& forward(const Mat<S>& x) {
    if (x.cols() != W.cols()) throw std::invalid_argument("dense: input shape mismatch");
    x_cache = x;
    y_cache.noalias() = x * W.transpose();
    y_cache.rowwise() += b.transpose();
    apply_activation(act, y_cache);
    return y_cache;
  }

  Mat<S> backward(const Mat<S>& dy) {
    if (dy.rows() != y_cache.rows() || dy.cols() != y_cache.cols())
      throw std::invalid_argument("dense: gradient shape mismatch");
    Mat<S> dz = activation_grad_from_output(act, y_cache, dy);
    dW.noalias() += dz.transpose() * x_cache;
    db.noalias() += dz.colwise().sum().transpose();
    Mat<S> dx;
    dx.noalias() = dz * W;
    return dx;
  }

  void params(ParamList<S>& out, const std::string& prefix) {
    out.add(prefix + ".W", W, dW);
    out.add(prefix + ".b", b, db);
  }
};

}  // namespace twsent::nn

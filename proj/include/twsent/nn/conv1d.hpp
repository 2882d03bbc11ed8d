#pragma once

#include "twsent/nn/core.hpp"
#include "twsent/rng.hpp"

namespace twsent::nn {

// 1-D convolution over timestep-major sequences, stride 1, valid padding,
// linear activation. Kernels are stored flattened as out_ch x (in_ch*width)
// so forward is an im2col GEMM.
template <typename S>
struct Conv1d {
  int in_ch = 0;
  int out_ch = 0;
  int width = 1;
  Mat<S> W;  // out_ch x (in_ch*width)
  Vec<S> b;

  Mat<S> dW;
  Vec<S> db;

  int T = 0, B = 0, To = 0;
  Mat<S> cols;  // (To*B) x (in_ch*width)

  Conv1d() = default;
  Conv1d(int in_channels, int out_channels, int kernel_width, twsent::Rng& rng)
      : in_ch(in_channels), out_ch(out_channels), width(kernel_width) {
    W.resize(out_ch, in_ch * width);
    b = Vec<S>::Zero(out_ch);
    const double limit = std::sqrt(6.0 / (in_ch * width + out_ch));
    for (Eigen::Index i = 0; i < W.size(); ++i)
      W.data()[i] = static_cast<S>((rng.next_double() * 2.0 - 1.0) * limit);
    dW = Mat<S>::Zero(out_ch, in_ch * width);
    db = Vec<S>::Zero(out_ch);
  }

  // x: (T*B) x in_ch. Returns (To*B) x out_ch with To = T - width + 1.
  Mat<S> forward(const Mat<S>& x, int steps) {
    if (x.cols() != in_ch) throw std::invalid_argument("conv1d: input shape mismatch");
    if (steps < width) throw std::invalid_argument("conv1d: sequence shorter than kernel");
    T = steps;
    B = static_cast<int>(x.rows()) / T;
    To = T - width + 1;
    cols.resize(To * B, in_ch * width);
    for (int t = 0; t < To; ++t)
      for (int k = 0; k < width; ++k)
        cols.block(t * B, k * in_ch, B, in_ch) = x.middleRows((t + k) * B, B);
    Mat<S> y;
    y.noalias() = cols * W.transpose();
    y.rowwise() += b.transpose();
    return y;
  }

  // dy: (To*B) x out_ch. Returns dX of shape (T*B) x in_ch.
  Mat<S> backward(const Mat<S>& dy) {
    dW.noalias() += dy.transpose() * cols;
    db.noalias() += dy.colwise().sum().transpose();
    Mat<S> dcols;
    dcols.noalias() = dy * W;
    Mat<S> dx = Mat<S>::Zero(T * B, in_ch);
    for (int t = 0; t < To; ++t)
      for (int k = 0; k < width; ++k)
        dx.middleRows((t + k) * B, B) += dcols.block(t * B, k * in_ch, B, in_ch);
    return dx;
  }

  void params(ParamList<S>& out, const std::string& prefix) {
    out.add(prefix + ".W", W, dW);
    out.add(prefix + ".b", b, db);
  }
};

// Max over the time axis per (batch element, channel).
template <typename S>
struct GlobalMaxPool1d {
  int T = 0, B = 0, C = 0;
  std::vector<int> argmax;  // B*C winner timesteps

  // x: (T*B) x C. Returns B x C.
  Mat<S> forward(const Mat<S>& x, int steps) {
    T = steps;
    B = static_cast<int>(x.rows()) / T;
    C = static_cast<int>(x.cols());
    argmax.assign(static_cast<std::size_t>(B) * C, 0);
    Mat<S> y(B, C);
    for (int bi = 0; bi < B; ++bi)
      for (int c = 0; c < C; ++c) {
        S best = x(bi, c);
        int bt = 0;
        for (int t = 1; t < T; ++t) {
          const S v = x(t * B + bi, c);
          if (v > best) {
            best = v;
            bt = t;
          }
        }
        y(bi, c) = best;
        argmax[static_cast<std::size_t>(bi) * C + c] = bt;
      }
    return y;
  }

  Mat<S> backward(const Mat<S>& dy) {
    Mat<S> dx = Mat<S>::Zero(T * B, C);
    for (int bi = 0; bi < B; ++bi)
      for (int c = 0; c < C; ++c)
        dx(argmax[static_cast<std::size_t>(bi) * C + c] * B + bi, c) += dy(bi, c);
    return dx;
  }
};

}  // namespace twsent::nn

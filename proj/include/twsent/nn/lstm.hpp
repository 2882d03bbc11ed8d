#pragma once

#include "twsent/nn/core.hpp"
#include "twsent/rng.hpp"

namespace twsent::nn {

// LSTM layer over fixed-length sequences. All sequence tensors are
// timestep-major: row (t*B + b) holds batch element b at step t, so each
// step's batch slab is one contiguous GEMM operand. Gate order inside the
// packed 4H dimension is input, forget, output, candidate.
template <typename S>
struct Lstm {
  int in = 0;
  int hidden = 0;
  Mat<S> Wx;  // 4H x in
  Mat<S> Wh;  // 4H x H
  Vec<S> b;   // 4H

  Mat<S> dWx, dWh;
  Vec<S> db;

  // caches from the last forward
  int T = 0, B = 0;
  Mat<S> x_cache;  // (T*B) x in
  Mat<S> gates;    // (T*B) x 4H, post-activation
  Mat<S> c_all;    // (T*B) x H
  Mat<S> tanh_c;   // (T*B) x H
  Mat<S> h_all;    // (T*B) x H

  Lstm() = default;
  Lstm(int in_dim, int hidden_dim, twsent::Rng& rng) : in(in_dim), hidden(hidden_dim) {
    Wx.resize(4 * hidden, in);
    Wh.resize(4 * hidden, hidden);
    b = Vec<S>::Zero(4 * hidden);
    b.segment(hidden, hidden).setOnes();  // forget-gate bias 1.0
    const double lx = std::sqrt(6.0 / (in + hidden));
    const double lh = std::sqrt(6.0 / (hidden + hidden));
    for (Eigen::Index i = 0; i < Wx.size(); ++i)
      Wx.data()[i] = static_cast<S>((rng.next_double() * 2.0 - 1.0) * lx);
    for (Eigen::Index i = 0; i < Wh.size(); ++i)
      Wh.data()[i] = static_cast<S>((rng.next_double() * 2.0 - 1.0) * lh);
    dWx = Mat<S>::Zero(4 * hidden, in);
    dWh = Mat<S>::Zero(4 * hidden, hidden);
    db = Vec<S>::Zero(4 * hidden);
  }

  // x: (T*B) x in. Returns h for every step, (T*B) x H.
  const Mat<S>& forward(const Mat<S>& x, int steps) {
    if (x.cols() != in) throw std::invalid_argument("lstm: input shape mismatch");
    if (steps <= 0 || x.rows() % steps != 0)
      throw std::invalid_argument("lstm: rows not divisible by steps");
    T = steps;
    B = static_cast<int>(x.rows()) / T;
    const int H = hidden;
    x_cache = x;
    gates.noalias() = x * Wx.transpose();
    gates.rowwise() += b.transpose();
    c_all.resize(T * B, H);
    tanh_c.resize(T * B, H);
    h_all.resize(T * B, H);

    for (int t = 0; t < T; ++t) {
      auto g = gates.middleRows(t * B, B);
      if (t > 0) g.noalias() += h_all.middleRows((t - 1) * B, B) * Wh.transpose();
      auto gi = g.leftCols(H);
      auto gf = g.middleCols(H, H);
      auto go = g.middleCols(2 * H, H);
      auto gc = g.rightCols(H);
      gi = (S(1) / (S(1) + (-gi.array()).exp())).matrix();
      gf = (S(1) / (S(1) + (-gf.array()).exp())).matrix();
      go = (S(1) / (S(1) + (-go.array()).exp())).matrix();
      gc = gc.array().tanh().matrix();

      auto c = c_all.middleRows(t * B, B);
      if (t > 0)
        c = gf.cwiseProduct(c_all.middleRows((t - 1) * B, B)) + gi.cwiseProduct(gc);
      else
        c = gi.cwiseProduct(gc);
      tanh_c.middleRows(t * B, B) = c.array().tanh().matrix();
      h_all.middleRows(t * B, B) = go.cwiseProduct(tanh_c.middleRows(t * B, B));
    }
    return h_all;
  }

  // dh_all: (T*B) x H gradient on every step's output. Returns dX.
  Mat<S> backward(const Mat<S>& dh_all) {
    const int H = hidden;
    Mat<S> dz(T * B, 4 * H);
    Mat<S> dh_next = Mat<S>::Zero(B, H);
    Mat<S> dc_next = Mat<S>::Zero(B, H);

    for (int t = T - 1; t >= 0; --t) {
      auto g = gates.middleRows(t * B, B);
      auto gi = g.leftCols(H);
      auto gf = g.middleCols(H, H);
      auto go = g.middleCols(2 * H, H);
      auto gc = g.rightCols(H);
      auto tc = tanh_c.middleRows(t * B, B);

      Mat<S> dh = dh_all.middleRows(t * B, B) + dh_next;
      Mat<S> dout = dh.cwiseProduct(tc);
      Mat<S> dc =
          dh.cwiseProduct(go).cwiseProduct((S(1) - tc.array().square()).matrix()) + dc_next;

      Mat<S> di = dc.cwiseProduct(gc);
      Mat<S> dcand = dc.cwiseProduct(gi);
      Mat<S> df;
      if (t > 0)
        df = dc.cwiseProduct(c_all.middleRows((t - 1) * B, B));
      else
        df = Mat<S>::Zero(B, H);
      dc_next = dc.cwiseProduct(gf);

      auto dzt = dz.middleRows(t * B, B);
      dzt.leftCols(H) = di.cwiseProduct((gi.array() * (S(1) - gi.array())).matrix());
      dzt.middleCols(H, H) = df.cwiseProduct((gf.array() * (S(1) - gf.array())).matrix());
      dzt.middleCols(2 * H, H) = dout.cwiseProduct((go.array() * (S(1) - go.array())).matrix());
      dzt.rightCols(H) = dcand.cwiseProduct((S(1) - gc.array().square()).matrix());

      dh_next.noalias() = dzt * Wh;
    }

    dWx.noalias() += dz.transpose() * x_cache;
    if (T > 1)
      dWh.noalias() += dz.bottomRows((T - 1) * B).transpose() * h_all.topRows((T - 1) * B);
    db.noalias() += dz.colwise().sum().transpose();
    Mat<S> dx;
    dx.noalias() = dz * Wx;
    return dx;
  }

  void params(ParamList<S>& out, const std::string& prefix) {
    out.add(prefix + ".Wx", Wx, dWx);
    out.add(prefix + ".Wh", Wh, dWh);
    out.add(prefix + ".b", b, db);
  }
};

// Single gated update, the reference form of the recurrence.
template <typename S>
void lstm_step(const Lstm<S>& p, const Vec<S>& x, const Vec<S>& h_prev, const Vec<S>& c_prev,
               Vec<S>& h, Vec<S>& c) {
  if (x.size() != p.in || h_prev.size() != p.hidden || c_prev.size() != p.hidden)
    throw std::invalid_argument("lstm_step: shape mismatch");
  const int H = p.hidden;
  Vec<S> z = p.Wx * x + p.Wh * h_prev + p.b;
  auto sig = [](S v) { return S(1) / (S(1) + std::exp(-v)); };
  c.resize(H);
  h.resize(H);
  for (int k = 0; k < H; ++k) {
    const S gi = sig(z[k]);
    const S gf = sig(z[H + k]);
    const S go = sig(z[2 * H + k]);
    const S gc = std::tanh(z[3 * H + k]);
    c[k] = gf * c_prev[k] + gi * gc;
    h[k] = go * std::tanh(c[k]);
  }
}

}  // namespace twsent::nn

#include <catch2/catch_amalgamated.hpp>

#include "twsent/nn/adam.hpp"
#include "twsent/nn/conv1d.hpp"
#include "twsent/nn/dense.hpp"
#include "twsent/nn/dropout.hpp"
#include "twsent/nn/grad_check.hpp"
#include "twsent/nn/loss.hpp"
#include "twsent/nn/lstm.hpp"

using namespace twsent;
using nn::Mat;
using nn::Vec;

namespace {
Mat<double> random_mat(Rng& rng, int r, int c, double scale = 1.0) {
  Mat<double> m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = (rng.next_double() * 2 - 1) * scale;
  return m;
}
}  // namespace

TEST_CASE("dense forward closed forms") {
  Rng rng(1);
  SECTION("zero weights with sigmoid give 0.5") {
    nn::Dense<double> d(3, 2, nn::Activation::sigmoid, rng);
    d.W.setZero();
    d.b.setZero();
    Mat<double> x = random_mat(rng, 4, 3);
    Mat<double> y = d.forward(x);
    for (Eigen::Index i = 0; i < y.size(); ++i)
      CHECK_THAT(y.data()[i], Catch::Matchers::WithinAbs(0.5, 1e-15));
  }
  SECTION("identity weights with linear activation pass through") {
    nn::Dense<double> d(3, 3, nn::Activation::linear, rng);
    d.W.setIdentity();
    d.b.setZero();
    Mat<double> x = random_mat(rng, 2, 3);
    CHECK(d.forward(x).isApprox(x, 1e-14));
  }
  SECTION("shape mismatch throws") {
    nn::Dense<double> d(3, 2, nn::Activation::linear, rng);
    Mat<double> bad = random_mat(rng, 2, 4);
    CHECK_THROWS(d.forward(bad));
  }
}

TEST_CASE("dense gradients match finite differences across activations") {
  for (auto act : {nn::Activation::linear, nn::Activation::relu, nn::Activation::tanh,
                   nn::Activation::sigmoid}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng rng(seed);
      nn::Dense<double> d(4, 3, act, rng);
      Mat<double> x = random_mat(rng, 2, 4);
      Mat<double> target = random_mat(rng, 2, 3);

      auto loss_fn = [&] {
        nn::Dense<double> copy = d;  // forward mutates caches only
        Mat<double> y = copy.forward(x);
        return 0.5 * (y - target).squaredNorm();
      };
      Mat<double> y = d.forward(x);
      nn::ParamList<double> params;
      d.params(params, "dense");
      params.zero_grads();
      d.backward(y - target);
      auto report = nn::grad_check(params, loss_fn);
      INFO("activation " << nn::activation_name(act) << " worst " << report.worst_tensor);
      CHECK(report.pass);
    }
  }
}

TEST_CASE("dense input gradient matches finite differences") {
  Rng rng(77);
  nn::Dense<double> d(4, 3, nn::Activation::tanh, rng);
  Mat<double> x = random_mat(rng, 2, 4);
  Mat<double> target = random_mat(rng, 2, 3);
  Mat<double> y = d.forward(x);
  nn::ParamList<double> params;
  d.params(params, "dense");
  params.zero_grads();
  Mat<double> dx = d.backward(y - target);

  const double h = 1e-5;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x.data()[i];
    auto eval = [&] {
      Mat<double> yy = d.forward(x);
      return 0.5 * (yy - target).squaredNorm();
    };
    x.data()[i] = saved + h;
    const double lp = eval();
    x.data()[i] = saved - h;
    const double lm = eval();
    x.data()[i] = saved;
    d.forward(x);
    const double numeric = (lp - lm) / (2 * h);
    CHECK_THAT(dx.data()[i], Catch::Matchers::WithinAbs(numeric, 1e-6));
  }
}

TEST_CASE("lstm_step zero-parameter algebra") {
  Rng rng(3);
  nn::Lstm<double> p(3, 4, rng);
  p.Wx.setZero();
  p.Wh.setZero();
  p.b.setZero();

  Vec<double> x = Vec<double>::Ones(3);
  Vec<double> h0 = Vec<double>::Zero(4), c0 = Vec<double>::Zero(4);
  Vec<double> h, c;

  SECTION("all-zero state stays zero") {
    nn::lstm_step(p, x, h0, c0, h, c);
    CHECK(h.isZero(1e-15));
    CHECK(c.isZero(1e-15));
  }
  SECTION("previous cell halves and re-squashes") {
    Vec<double> cv(4);
    cv << 0.3, -0.8, 1.5, 0.0;
    nn::lstm_step(p, x, h0, cv, h, c);
    for (int k = 0; k < 4; ++k) {
      CHECK_THAT(c[k], Catch::Matchers::WithinAbs(0.5 * cv[k], 1e-14));
      CHECK_THAT(h[k], Catch::Matchers::WithinAbs(0.5 * std::tanh(0.5 * cv[k]), 1e-14));
    }
  }
  SECTION("shape mismatch throws") {
    Vec<double> bad = Vec<double>::Zero(2);
    CHECK_THROWS(nn::lstm_step(p, bad, h0, c0, h, c));
  }
}

TEST_CASE("lstm batched forward equals repeated lstm_step") {
  Rng rng(9);
  nn::Lstm<double> layer(3, 4, rng);
  const int T = 5, B = 2;
  Mat<double> x = random_mat(rng, T * B, 3);
  Mat<double> h_all = layer.forward(x, T);

  for (int b = 0; b < B; ++b) {
    Vec<double> h = Vec<double>::Zero(4), c = Vec<double>::Zero(4);
    for (int t = 0; t < T; ++t) {
      Vec<double> xi = x.row(t * B + b).transpose();
      Vec<double> hn, cn;
      nn::lstm_step(layer, xi, h, c, hn, cn);
      h = hn;
      c = cn;
      for (int k = 0; k < 4; ++k)
        CHECK_THAT(h_all(t * B + b, k), Catch::Matchers::WithinAbs(h[k], 1e-12));
    }
  }
}

TEST_CASE("lstm gradients through 3 steps match finite differences") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    nn::Lstm<double> layer(3, 4, rng);
    const int T = 3, B = 2;
    Mat<double> x = random_mat(rng, T * B, 3);
    Mat<double> target = random_mat(rng, T * B, 4);

    auto loss_fn = [&] {
      nn::Lstm<double> copy = layer;
      const Mat<double>& h = copy.forward(x, T);
      return 0.5 * (h - target).squaredNorm();
    };
    const Mat<double>& h = layer.forward(x, T);
    nn::ParamList<double> params;
    layer.params(params, "lstm");
    params.zero_grads();
    layer.backward(h - target);
    auto report = nn::grad_check(params, loss_fn);
    INFO("seed " << seed << " worst " << report.worst_tensor << " err " << report.max_rel_err);
    CHECK(report.pass);
  }
}

TEST_CASE("lstm input gradients match finite differences") {
  Rng rng(4);
  nn::Lstm<double> layer(2, 3, rng);
  const int T = 3, B = 1;
  Mat<double> x = random_mat(rng, T * B, 2);
  Mat<double> target = random_mat(rng, T * B, 3);
  const Mat<double>& h = layer.forward(x, T);
  nn::ParamList<double> params;
  layer.params(params, "lstm");
  params.zero_grads();
  Mat<double> dx = layer.backward(h - target);

  const double step = 1e-5;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x.data()[i];
    auto eval = [&] {
      nn::Lstm<double> copy = layer;
      const Mat<double>& hh = copy.forward(x, T);
      return 0.5 * (hh - target).squaredNorm();
    };
    x.data()[i] = saved + step;
    const double lp = eval();
    x.data()[i] = saved - step;
    const double lm = eval();
    x.data()[i] = saved;
    CHECK_THAT(dx.data()[i], Catch::Matchers::WithinAbs((lp - lm) / (2 * step), 1e-6));
  }
}

TEST_CASE("conv1d closed forms") {
  Rng rng(5);
  SECTION("identity kernel") {
    nn::Conv1d<double> conv(1, 1, 1, rng);
    conv.W(0, 0) = 1.0;
    conv.b.setZero();
    Mat<double> x = random_mat(rng, 6, 1);
    Mat<double> y = conv.forward(x, 6);
    CHECK(y.isApprox(x, 1e-14));
  }
  SECTION("box kernel [1,1,1] on 1..4 gives [6,9]") {
    nn::Conv1d<double> conv(1, 1, 3, rng);
    conv.W.setOnes();
    conv.b.setZero();
    Mat<double> x(4, 1);
    x << 1, 2, 3, 4;
    Mat<double> y = conv.forward(x, 4);
    REQUIRE(y.rows() == 2);
    CHECK_THAT(y(0, 0), Catch::Matchers::WithinAbs(6.0, 1e-14));
    CHECK_THAT(y(1, 0), Catch::Matchers::WithinAbs(9.0, 1e-14));
  }
  SECTION("sequence shorter than kernel throws") {
    nn::Conv1d<double> conv(1, 1, 3, rng);
    Mat<double> x(2, 1);
    x << 1, 2;
    CHECK_THROWS(conv.forward(x, 2));
  }
}

TEST_CASE("conv1d gradients match finite differences") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    nn::Conv1d<double> conv(2, 3, 3, rng);
    const int T = 6, B = 2;
    Mat<double> x = random_mat(rng, T * B, 2);
    Mat<double> target = random_mat(rng, (T - 2) * B, 3);
    auto loss_fn = [&] {
      nn::Conv1d<double> copy = conv;
      Mat<double> y = copy.forward(x, T);
      return 0.5 * (y - target).squaredNorm();
    };
    Mat<double> y = conv.forward(x, T);
    nn::ParamList<double> params;
    conv.params(params, "conv");
    params.zero_grads();
    Mat<double> dx = conv.backward(y - target);
    auto report = nn::grad_check(params, loss_fn);
    CHECK(report.pass);

    // input gradient, a few coordinates
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(x.size(), 8); ++i) {
      const double saved = x.data()[i];
      x.data()[i] = saved + h;
      const double lp = loss_fn();
      x.data()[i] = saved - h;
      const double lm = loss_fn();
      x.data()[i] = saved;
      CHECK_THAT(dx.data()[i], Catch::Matchers::WithinAbs((lp - lm) / (2 * h), 1e-6));
    }
  }
}

TEST_CASE("global max pool routes gradient to the argmax") {
  nn::GlobalMaxPool1d<double> pool;
  Mat<double> x(6, 2);  // T=3, B=2
  x << 1, 9, 2, 8, 5, 7, 3, 1, 4, 2, 0, 6;
  Mat<double> y = pool.forward(x, 3);
  REQUIRE(y.rows() == 2);
  CHECK(y(0, 0) == 5);   // max over rows 0,2,4 col 0
  CHECK(y(1, 1) == 8);   // max over rows 1,3,5 col 1
  Mat<double> dy = Mat<double>::Ones(2, 2);
  Mat<double> dx = pool.backward(dy);
  CHECK(dx(2, 0) == 1);  // 5 sits at timestep 1, batch 0
  CHECK(dx(1, 1) == 1);  // 8 sits at timestep 0, batch 1
  CHECK(dx(0, 0) == 0);
  CHECK(dx.sum() == 4);
}

TEST_CASE("dropout behavior") {
  std::vector<double> x(1000000, 2.0);
  SECTION("rate 0 and eval mode are the identity") {
    CHECK(nn::dropout(x, 0.0, true, 1) == x);
    CHECK(nn::dropout(x, 0.5, false, 1) == x);
  }
  SECTION("observed zero fraction ~ rate") {
    auto y = nn::dropout(x, 0.2, true, 42);
    const double zeros = static_cast<double>(std::count(y.begin(), y.end(), 0.0));
    CHECK_THAT(zeros / 1e6, Catch::Matchers::WithinAbs(0.2, 0.002));
  }
  SECTION("inverted scaling keeps the expectation") {
    auto y = nn::dropout(std::vector<double>(100000, 3.0), 0.2, true, 43);
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    CHECK_THAT(mean, Catch::Matchers::WithinRel(3.0, 0.01));
  }
  SECTION("rate out of range throws") {
    CHECK_THROWS(nn::dropout(x, 1.0, true, 1));
    CHECK_THROWS(nn::dropout(x, -0.1, true, 1));
  }
}

TEST_CASE("bce loss closed forms and gradient") {
  SECTION("perfect prediction is ~0 after clamping") {
    CHECK(nn::bce_loss<double>(1.0, 1).loss < 2e-7);
    CHECK(nn::bce_loss<double>(0.0, 0).loss < 2e-7);
  }
  SECTION("p=0.5 gives ln 2") {
    CHECK_THAT(nn::bce_loss<double>(0.5, 0).loss,
               Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
    CHECK_THAT(nn::bce_loss<double>(0.5, 1).loss,
               Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
  }
  SECTION("gradient matches finite differences at p=0.3, y=1") {
    const double h = 1e-7;
    const double num =
        (nn::bce_loss<double>(0.3 + h, 1).loss - nn::bce_loss<double>(0.3 - h, 1).loss) / (2 * h);
    CHECK_THAT(nn::bce_loss<double>(0.3, 1).dp, Catch::Matchers::WithinRel(num, 1e-5));
  }
}

TEST_CASE("sigmoid head plus bce gradient matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    nn::Dense<double> head(5, 1, nn::Activation::sigmoid, rng);
    Mat<double> x = random_mat(rng, 3, 5);
    std::vector<int> labels = {1, 0, 1};

    auto loss_fn = [&] {
      nn::Dense<double> copy = head;
      Mat<double> p = copy.forward(x);
      Mat<double> dp;
      return static_cast<double>(nn::bce_loss_batch(p, labels, dp));
    };
    Mat<double> p = head.forward(x);
    Mat<double> dp;
    nn::bce_loss_batch(p, labels, dp);
    nn::ParamList<double> params;
    head.params(params, "head");
    params.zero_grads();
    head.backward(dp);
    auto report = nn::grad_check(params, loss_fn);
    CHECK(report.pass);
  }
}

TEST_CASE("grad_check flags a corrupted backward pass") {
  Rng rng(12);
  nn::Dense<double> d(3, 2, nn::Activation::tanh, rng);
  Mat<double> x = random_mat(rng, 2, 3);
  Mat<double> target = random_mat(rng, 2, 2);
  auto loss_fn = [&] {
    nn::Dense<double> copy = d;
    Mat<double> y = copy.forward(x);
    return 0.5 * (y - target).squaredNorm();
  };
  Mat<double> y = d.forward(x);
  nn::ParamList<double> params;
  d.params(params, "dense");
  params.zero_grads();
  d.backward(target - y);  // sign-flipped gradient
  auto report = nn::grad_check(params, loss_fn);
  CHECK_FALSE(report.pass);
}

TEST_CASE("adam closed-form behavior") {
  SECTION("zero gradients never move parameters") {
    std::vector<float> p = {1.0f, -2.0f};
    std::vector<float> g = {0.0f, 0.0f};
    nn::ParamList<float> params;
    params.tensors.push_back({"p", p.data(), g.data(), 2});
    nn::AdamState<float> adam;
    adam.init(params);
    for (int i = 0; i < 10; ++i) adam.update(params);
    CHECK(p[0] == 1.0f);
    CHECK(p[1] == -2.0f);
  }
  SECTION("first step moves by ~lr in the gradient direction") {
    std::vector<float> p = {0.0f};
    std::vector<float> g = {0.37f};
    nn::ParamList<float> params;
    params.tensors.push_back({"p", p.data(), g.data(), 1});
    nn::AdamState<float> adam;
    adam.lr = 1e-3;
    adam.init(params);
    adam.update(params);
    CHECK_THAT(p[0], Catch::Matchers::WithinRel(-1e-3, 1e-4));
  }
  SECTION("identical runs take identical trajectories") {
    auto run = [] {
      std::vector<float> p = {0.5f, -0.5f};
      std::vector<float> g = {0.0f, 0.0f};
      nn::ParamList<float> params;
      params.tensors.push_back({"p", p.data(), g.data(), 2});
      nn::AdamState<float> adam;
      adam.init(params);
      Rng rng(3);
      for (int i = 0; i < 50; ++i) {
        g[0] = rng.next_float() - 0.5f;
        g[1] = rng.next_float() - 0.5f;
        adam.update(params);
      }
      return p;
    };
    CHECK(run() == run());
  }
}

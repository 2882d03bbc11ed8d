#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twsent::nn {

// Batch-major dense storage. Scalar is float for training speed and double
// for the finite-difference checks; both instantiate the same layer code.
template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

enum class Activation { linear, relu, tanh, sigmoid };

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

inline Activation activation_from_name(const std::string& s) {
  if (s == "linear") return Activation::linear;
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("nn: unknown activation " + s);
}

template <typename S>
void apply_activation(Activation act, Mat<S>& z) {
  switch (act) {
    case Activation::linear: break;
    case Activation::relu: z = z.cwiseMax(S(0)); break;
    case Activation::tanh: z = z.array().tanh().matrix(); break;
    case Activation::sigmoid:
      z = (S(1) / (S(1) + (-z.array()).exp())).matrix();
      break;
  }
}

// Derivative expressed through the activation's own output.
template <typename S>
Mat<S> activation_grad_from_output(Activation act, const Mat<S>& y, const Mat<S>& dy) {
  switch (act) {
    case Activation::linear: return dy;
    case Activation::relu:
      return (y.array() > S(0)).template cast<S>().matrix().cwiseProduct(dy);
    case Activation::tanh:
      return (S(1) - y.array().square()).matrix().cwiseProduct(dy);
    case Activation::sigmoid:
      return (y.array() * (S(1) - y.array())).matrix().cwiseProduct(dy);
  }
  return dy;
}

// Flat view of one parameter tensor and its gradient accumulator; the
// optimizer and the checkpoint writer both walk these in declaration order.
template <typename S>
struct TensorRef {
  std::string name;
  S* data = nullptr;
  S* grad = nullptr;
  std::size_t size = 0;
};

template <typename S>
struct ParamList {
  std::vector<TensorRef<S>> tensors;

  void add(const std::string& name, Mat<S>& p, Mat<S>& g) {
    tensors.push_back({name, p.data(), g.data(), static_cast<std::size_t>(p.size())});
  }
  void add(const std::string& name, Vec<S>& p, Vec<S>& g) {
    tensors.push_back({name, p.data(), g.data(), static_cast<std::size_t>(p.size())});
  }
  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += t.size;
    return n;
  }
  void zero_grads() {
    for (auto& t : tensors)
      for (std::size_t i = 0; i < t.size; ++i) t.grad[i] = S(0);
  }
};

}  // namespace twsent::nn

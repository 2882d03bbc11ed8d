#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twsent/nn/adam.hpp"
#include "twsent/nn/conv1d.hpp"
#include "twsent/nn/dense.hpp"
#include "twsent/nn/dropout.hpp"
#include "twsent/nn/loss.hpp"
#include "twsent/nn/lstm.hpp"
#include "twsent/rng.hpp"

namespace twsent {

enum class Arch { lstm, cnn, mlp };

inline const char* arch_name(Arch a) {
  switch (a) {
    case Arch::lstm: return "lstm";
    case Arch::cnn: return "cnn";
    case Arch::mlp: return "mlp";
  }
  return "?";
}

inline Arch arch_from_name(const std::string& s) {
  if (s == "lstm") return Arch::lstm;
  if (s == "cnn") return Arch::cnn;
  if (s == "mlp") return Arch::mlp;
  throw std::invalid_argument("models: unknown arch " + s);
}

struct ClassifierConfig {
  Arch arch = Arch::lstm;
  int hidden_layers = 1;  // stack depth for lstm/cnn; the MLP is fixed at 3
  int hidden_size = 100;
  int input_dim = 100;
  double dropout = 0.2;
  int max_len = 93;
  int kernel_width = 3;
  std::uint64_t seed = 1;

  std::string descriptor() const {
    nlohmann::json j;
    j["arch"] = arch_name(arch);
    j["hidden_layers"] = hidden_layers;
    j["hidden_size"] = hidden_size;
    j["input_dim"] = input_dim;
    j["dropout"] = dropout;
    j["max_len"] = max_len;
    j["kernel_width"] = kernel_width;
    return j.dump();
  }

  static ClassifierConfig from_descriptor(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ClassifierConfig c;
    c.arch = arch_from_name(j.at("arch").get<std::string>());
    c.hidden_layers = j.at("hidden_layers").get<int>();
    c.hidden_size = j.at("hidden_size").get<int>();
    c.input_dim = j.at("input_dim").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.max_len = j.at("max_len").get<int>();
    c.kernel_width = j.at("kernel_width").get<int>();
    return c;
  }
};

// ---- pre-padding -----------------------------------------------------------

// One example's embedded tokens, flattened length x dim, row per token.
struct EmbeddedSequence {
  int dim = 0;
  std::vector<float> values;  // len * dim
  int length() const { return dim == 0 ? 0 : static_cast<int>(values.size()) / dim; }
};

struct PaddedRow {
  std::vector<float> values;  // max_len * dim, zeros prepended
  std::vector<bool> mask;     // true on content positions
  bool truncated = false;
};

// Zeros are prepended so content ends at the final position; inputs longer
// than max_len keep their last max_len tokens.
inline PaddedRow pad(const EmbeddedSequence& seq, int max_len) {
  PaddedRow out;
  const int dim = seq.dim;
  int len = seq.length();
  int start = 0;
  if (len > max_len) {
    start = len - max_len;
    len = max_len;
    out.truncated = true;
  }
  out.values.assign(static_cast<std::size_t>(max_len) * static_cast<std::size_t>(dim), 0.0f);
  out.mask.assign(static_cast<std::size_t>(max_len), false);
  const int offset = max_len - len;
  for (int i = 0; i < len; ++i) {
    out.mask[static_cast<std::size_t>(offset + i)] = true;
    std::copy(seq.values.begin() + static_cast<std::ptrdiff_t>(start + i) * dim,
              seq.values.begin() + static_cast<std::ptrdiff_t>(start + i + 1) * dim,
              out.values.begin() + static_cast<std::ptrdiff_t>(offset + i) * dim);
  }
  return out;
}

// ---- the classifier stacks --------------------------------------------------

// LSTM variant: stacked LSTM layers, dropout after each, final-timestep
// hidden state into a 1-unit sigmoid head. CNN variant: stacked linear
// width-3 convolutions, dropout after each, global max pooling, same head.
// MLP variant: 3 ReLU layers with dropout on a single feature vector.
template <typename S>
class SequenceClassifier {
 public:
  explicit SequenceClassifier(const ClassifierConfig& cfg) : cfg_(cfg) {
    if (cfg.hidden_layers < 1) throw std::invalid_argument("models: hidden_layers must be >= 1");
    if (cfg.hidden_size < 1 || cfg.input_dim < 1)
      throw std::invalid_argument("models: sizes must be positive");
    twsent::Rng rng(derive_seed(cfg.seed, 0x1417));
    int feat = cfg.input_dim;
    switch (cfg.arch) {
      case Arch::lstm:
        for (int i = 0; i < cfg.hidden_layers; ++i) {
          lstm_.emplace_back(feat, cfg.hidden_size, rng);
          drops_.emplace_back(cfg.dropout);
          feat = cfg.hidden_size;
        }
        break;
      case Arch::cnn:
        if (cfg.max_len - cfg.hidden_layers * (cfg.kernel_width - 1) < 1)
          throw std::invalid_argument("models: conv stack longer than the padded sequence");
        for (int i = 0; i < cfg.hidden_layers; ++i) {
          conv_.emplace_back(feat, cfg.hidden_size, cfg.kernel_width, rng);
          drops_.emplace_back(cfg.dropout);
          feat = cfg.hidden_size;
        }
        break;
      case Arch::mlp:
        for (int i = 0; i < 3; ++i) {
          dense_.emplace_back(feat, cfg.hidden_size, nn::Activation::relu, rng);
          drops_.emplace_back(cfg.dropout);
          feat = cfg.hidden_size;
        }
        break;
    }
    head_ = nn::Dense<S>(feat, 1, nn::Activation::sigmoid, rng);
  }

  const ClassifierConfig& config() const { return cfg_; }

  // x is timestep-major (T*B) x input_dim for lstm/cnn, or B x input_dim
  // for the MLP. Returns B x 1 probabilities.
  nn::Mat<S> forward(const nn::Mat<S>& x, int T, bool train, twsent::Rng& rng) {
    switch (cfg_.arch) {
      case Arch::lstm: {
        nn::Mat<S> cur = x;
        for (std::size_t i = 0; i < lstm_.size(); ++i) {
          cur = lstm_[i].forward(cur, T);
          cur = drops_[i].forward(cur, train, rng);
        }
        const int B = static_cast<int>(cur.rows()) / T;
        last_T_ = T;
        last_B_ = B;
        nn::Mat<S> final_h = cur.middleRows((T - 1) * B, B);
        return head_.forward(final_h);
      }
      case Arch::cnn: {
        nn::Mat<S> cur = x;
        int t = T;
        for (std::size_t i = 0; i < conv_.size(); ++i) {
          cur = conv_[i].forward(cur, t);
          t -= cfg_.kernel_width - 1;
          cur = drops_[i].forward(cur, train, rng);
        }
        cur = pool_.forward(cur, t);
        return head_.forward(cur);
      }
      case Arch::mlp: {
        nn::Mat<S> cur = x;
        for (std::size_t i = 0; i < dense_.size(); ++i) {
          cur = dense_[i].forward(cur);
          cur = drops_[i].forward(cur, train, rng);
        }
        return head_.forward(cur);
      }
    }
    throw std::logic_error("models: unreachable");
  }

  // dprob: B x 1 gradient on the head output.
  void backward(const nn::Mat<S>& dprob) {
    nn::Mat<S> d = head_.backward(dprob);
    switch (cfg_.arch) {
      case Arch::lstm: {
        nn::Mat<S> dseq = nn::Mat<S>::Zero(last_T_ * last_B_, cfg_.hidden_size);
        dseq.middleRows((last_T_ - 1) * last_B_, last_B_) = d;
        for (std::size_t i = lstm_.size(); i-- > 0;) {
          dseq = drops_[i].backward(dseq);
          dseq = lstm_[i].backward(dseq);
        }
        break;
      }
      case Arch::cnn: {
        nn::Mat<S> dseq = pool_.backward(d);
        for (std::size_t i = conv_.size(); i-- > 0;) {
          dseq = drops_[i].backward(dseq);
          dseq = conv_[i].backward(dseq);
        }
        break;
      }
      case Arch::mlp: {
        nn::Mat<S> dcur = d;
        for (std::size_t i = dense_.size(); i-- > 0;) {
          dcur = drops_[i].backward(dcur);
          dcur = dense_[i].backward(dcur);
        }
        break;
      }
    }
  }

  nn::ParamList<S> params() {
    nn::ParamList<S> out;
    for (std::size_t i = 0; i < lstm_.size(); ++i)
      lstm_[i].params(out, "lstm" + std::to_string(i));
    for (std::size_t i = 0; i < conv_.size(); ++i)
      conv_[i].params(out, "conv" + std::to_string(i));
    for (std::size_t i = 0; i < dense_.size(); ++i)
      dense_[i].params(out, "dense" + std::to_string(i));
    head_.params(out, "head");
    return out;
  }

 private:
  ClassifierConfig cfg_;
  std::vector<nn::Lstm<S>> lstm_;
  std::vector<nn::Conv1d<S>> conv_;
  std::vector<nn::Dense<S>> dense_;
  std::vector<nn::Dropout<S>> drops_;
  nn::GlobalMaxPool1d<S> pool_;
  nn::Dense<S> head_;
  int last_T_ = 0, last_B_ = 0;
};

// ---- training ----------------------------------------------------------------

struct SequenceDataset {
  int dim = 0;
  std::vector<EmbeddedSequence> examples;  // empty for mlp datasets
  std::vector<std::vector<float>> features;  // mlp feature vectors
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

struct FitSettings {
  int epochs = 9;
  int batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 1;
};

struct FitLog {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;  // accuracy of the dropout-active training passes
};

namespace detail {

// Assemble a timestep-major (max_len*B) x dim batch from ragged examples.
template <typename S>
nn::Mat<S> build_padded_batch(const SequenceDataset& data, const std::vector<std::size_t>& idx,
                              int max_len) {
  const int B = static_cast<int>(idx.size());
  const int D = data.dim;
  nn::Mat<S> x = nn::Mat<S>::Zero(max_len * B, D);
  for (int b = 0; b < B; ++b) {
    const EmbeddedSequence& seq = data.examples[idx[static_cast<std::size_t>(b)]];
    int len = seq.length();
    int start = 0;
    if (len > max_len) {
      start = len - max_len;
      len = max_len;
    }
    const int offset = max_len - len;
    for (int t = 0; t < len; ++t)
      for (int d = 0; d < D; ++d)
        x((offset + t) * B + b, d) = static_cast<S>(seq.values[static_cast<std::size_t>(
            (start + t) * D + d)]);
  }
  return x;
}

template <typename S>
nn::Mat<S> build_feature_batch(const SequenceDataset& data, const std::vector<std::size_t>& idx) {
  const int B = static_cast<int>(idx.size());
  const int D = data.dim;
  nn::Mat<S> x(B, D);
  for (int b = 0; b < B; ++b)
    for (int d = 0; d < D; ++d)
      x(b, d) = static_cast<S>(data.features[idx[static_cast<std::size_t>(b)]]
                                            [static_cast<std::size_t>(d)]);
  return x;
}

}  // namespace detail

// Mini-batch Adam + BCE. Shuffles each epoch with the run seed; records the
// mean loss and the accuracy of the training forward passes per epoch.
template <typename S>
FitLog train_classifier(SequenceClassifier<S>& model, const SequenceDataset& data,
                        const FitSettings& fit) {
  if (data.size() == 0) throw std::invalid_argument("models: empty training data");
  const ClassifierConfig& cfg = model.config();
  nn::ParamList<S> params = model.params();
  nn::AdamState<S> adam;
  adam.lr = fit.lr;
  adam.init(params);

  FitLog log;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < fit.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(fit.seed, 0x0DD + static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(shuffle_rng.next_index(i));
      std::swap(order[i - 1], order[j]);
    }
    Rng drop_rng(derive_seed(fit.seed, 0xD120 + static_cast<std::uint64_t>(epoch)));

    double loss_sum = 0.0;
    std::size_t batches = 0, correct = 0;
    for (std::size_t off = 0; off < order.size(); off += static_cast<std::size_t>(fit.batch_size)) {
      const std::size_t take = std::min(static_cast<std::size_t>(fit.batch_size),
                                        order.size() - off);
      std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(off),
                                   order.begin() + static_cast<std::ptrdiff_t>(off + take));
      nn::Mat<S> x = cfg.arch == Arch::mlp
                         ? detail::build_feature_batch<S>(data, idx)
                         : detail::build_padded_batch<S>(data, idx, cfg.max_len);
      nn::Mat<S> prob = model.forward(x, cfg.max_len, /*train=*/true, drop_rng);

      std::vector<int> labels(take);
      for (std::size_t b = 0; b < take; ++b) labels[b] = data.labels[idx[b]];
      nn::Mat<S> dprob;
      const S loss = nn::bce_loss_batch(prob, labels, dprob);
      if (!std::isfinite(static_cast<double>(loss)))
        throw std::runtime_error("models: non-finite loss at epoch " + std::to_string(epoch) +
                                 ", batch " + std::to_string(batches));
      loss_sum += static_cast<double>(loss);
      ++batches;
      for (std::size_t b = 0; b < take; ++b)
        if ((prob(static_cast<Eigen::Index>(b), 0) >= S(0.5)) == (labels[b] == 1)) ++correct;

      params.zero_grads();
      model.backward(dprob);
      adam.update(params);
    }
    log.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
    log.epoch_accuracy.push_back(100.0 * static_cast<double>(correct) /
                                 static_cast<double>(data.size()));
  }
  return log;
}

// Eval-mode predictions (dropout off), batched.
template <typename S>
std::vector<double> predict_probabilities(SequenceClassifier<S>& model,
                                          const SequenceDataset& data, int batch_size = 256) {
  const ClassifierConfig& cfg = model.config();
  Rng unused(0);
  std::vector<double> out;
  out.reserve(data.size());
  for (std::size_t off = 0; off < data.size(); off += static_cast<std::size_t>(batch_size)) {
    const std::size_t take = std::min(static_cast<std::size_t>(batch_size), data.size() - off);
    std::vector<std::size_t> idx(take);
    std::iota(idx.begin(), idx.end(), off);
    nn::Mat<S> x = cfg.arch == Arch::mlp
                       ? detail::build_feature_batch<S>(data, idx)
                       : detail::build_padded_batch<S>(data, idx, cfg.max_len);
    nn::Mat<S> prob = model.forward(x, cfg.max_len, /*train=*/false, unused);
    for (std::size_t b = 0; b < take; ++b)
      out.push_back(static_cast<double>(prob(static_cast<Eigen::Index>(b), 0)));
  }
  return out;
}

template <typename S>
std::vector<int> predict_labels(SequenceClassifier<S>& model, const SequenceDataset& data,
                                int batch_size = 256) {
  std::vector<int> labels;
  for (double p : predict_probabilities(model, data, batch_size))
    labels.push_back(p >= 0.5 ? 1 : 0);
  return labels;
}

}  // namespace twsent

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "twsent/preprocess.hpp"

namespace twsent {

// Multinomial Naive Bayes over unigram counts with add-one smoothing.
// The smoothing denominator reserves one extra slot beyond the known
// vocabulary, so an unseen word gets likelihood 1/(tokens(c)+V+1) instead
// of zero:
//
//   P(w|c) = (count(w,c) + 1) / (tokens(c) + V + 1)
class NaiveBayesModel {
 public:
  static NaiveBayesModel train(const std::vector<TokenSequence>& seqs,
                               const std::vector<int>& labels) {
    if (seqs.size() != labels.size())
      throw std::invalid_argument("naive_bayes: sequence/label length mismatch");
    NaiveBayesModel m;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      const int c = labels[i];
      if (c != 0 && c != 1) throw std::invalid_argument("naive_bayes: label outside {0,1}");
      ++m.class_docs_[static_cast<std::size_t>(c)];
      for (const std::string& tok : seqs[i].tokens) {
        ++m.counts_[tok][static_cast<std::size_t>(c)];
        ++m.class_tokens_[static_cast<std::size_t>(c)];
      }
    }
    if (m.class_docs_[0] == 0 || m.class_docs_[1] == 0)
      throw std::runtime_error("naive_bayes: both classes must be present");
    m.finalize();
    return m;
  }

  struct Prediction {
    int label = 1;
    std::array<double, 2> log_posterior{};  // unnormalized joint log-scores
  };

  Prediction predict(const TokenSequence& seq) const {
    Prediction p;
    p.log_posterior = {log_prior_[0], log_prior_[1]};
    for (const std::string& tok : seq.tokens) {
      const auto it = counts_.find(tok);
      for (int c = 0; c < 2; ++c) {
        const std::uint64_t cnt = it == counts_.end() ? 0 : it->second[static_cast<std::size_t>(c)];
        p.log_posterior[static_cast<std::size_t>(c)] +=
            std::log(static_cast<double>(cnt + 1)) - log_denom_[static_cast<std::size_t>(c)];
      }
    }
    // deterministic tie-break to the positive class
    p.label = p.log_posterior[1] >= p.log_posterior[0] ? 1 : 0;
    return p;
  }

  std::size_t vocab_size() const { return vocab_size_; }
  std::uint64_t class_tokens(int c) const { return class_tokens_[static_cast<std::size_t>(c)]; }
  double log_prior(int c) const { return log_prior_[static_cast<std::size_t>(c)]; }

  double token_log_likelihood(const std::string& tok, int c) const {
    const auto it = counts_.find(tok);
    const std::uint64_t cnt = it == counts_.end() ? 0 : it->second[static_cast<std::size_t>(c)];
    return std::log(static_cast<double>(cnt + 1)) - log_denom_[static_cast<std::size_t>(c)];
  }

  // Plain-text persistence: exact integer counts, so a reloaded model
  // reproduces the same posteriors bit for bit. Tokens are written in
  // sorted order to keep the file deterministic.
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("naive_bayes: cannot write " + path);
    out << "twnb 1\n";
    out << "docs " << class_docs_[0] << ' ' << class_docs_[1] << '\n';
    out << "vocab " << vocab_size_ << '\n';
    std::vector<const std::string*> keys;
    keys.reserve(counts_.size());
    for (const auto& [tok, c] : counts_) keys.push_back(&tok);
    std::sort(keys.begin(), keys.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    for (const std::string* k : keys) {
      const auto& c = counts_.at(*k);
      out << *k << '\t' << c[0] << '\t' << c[1] << '\n';
    }
  }

  static NaiveBayesModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("naive_bayes: cannot open " + path);
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "twnb" || version != 1)
      throw std::runtime_error("naive_bayes: bad model file " + path);
    NaiveBayesModel m;
    std::string key;
    std::size_t vocab = 0;
    in >> key >> m.class_docs_[0] >> m.class_docs_[1];
    in >> key >> vocab;
    std::string tok;
    std::uint64_t c0 = 0, c1 = 0;
    while (in >> tok >> c0 >> c1) {
      m.counts_[tok] = {c0, c1};
      m.class_tokens_[0] += c0;
      m.class_tokens_[1] += c1;
    }
    if (m.counts_.size() != vocab)
      throw std::runtime_error("naive_bayes: truncated model file " + path);
    m.finalize();
    return m;
  }

 private:
  void finalize() {
    vocab_size_ = counts_.size();
    const double total = static_cast<double>(class_docs_[0] + class_docs_[1]);
    for (int c = 0; c < 2; ++c) {
      log_prior_[static_cast<std::size_t>(c)] =
          std::log(static_cast<double>(class_docs_[static_cast<std::size_t>(c)]) / total);
      log_denom_[static_cast<std::size_t>(c)] = std::log(
          static_cast<double>(class_tokens_[static_cast<std::size_t>(c)] + vocab_size_ + 1));
    }
  }

  std::unordered_map<std::string, std::array<std::uint64_t, 2>> counts_;
  std::array<std::uint64_t, 2> class_docs_{0, 0};
  std::array<std::uint64_t, 2> class_tokens_{0, 0};
  std::array<double, 2> log_prior_{};
  std::array<double, 2> log_denom_{};
  std::size_t vocab_size_ = 0;
};

}  // namespace twsent

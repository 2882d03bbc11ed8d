#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "twsent/embedding_trainer.hpp"

namespace twsent {

// Paragraph-vector training in the CBOW formulation: each position's context
// mean additionally includes the sentence's own doc vector, which trains like
// any other input row. Held-out sentences get a vector by freezing the word
// matrices and fitting only a fresh doc row.
struct SentenceVectors {
  int dim = 0;
  std::vector<std::int64_t> ids;     // tweet id per doc row
  std::vector<float> doc_vectors;    // N x D
  EmbeddingModel word_model;         // kind = cbow; matrices frozen after training
  std::vector<double> epoch_losses;

  float* doc_row(std::size_t i) { return doc_vectors.data() + i * static_cast<std::size_t>(dim); }
  const float* doc_row(std::size_t i) const {
    return doc_vectors.data() + i * static_cast<std::size_t>(dim);
  }

  std::ptrdiff_t row_of(std::int64_t id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }
  void rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < ids.size(); ++i) index_[ids[i]] = i;
  }

 private:
  std::unordered_map<std::int64_t, std::size_t> index_;
};

inline SentenceVectors train_sentence_vectors(const std::vector<TokenSequence>& corpus,
                                              const Vocabulary& vocab, const TrainConfig& cfg) {
  SentenceVectors sv;
  sv.dim = cfg.dim;
  sv.word_model = detail::init_model(EmbeddingKind::cbow, vocab, cfg);
  sv.ids.reserve(corpus.size());
  for (const TokenSequence& seq : corpus) sv.ids.push_back(seq.source_id);
  sv.doc_vectors.resize(corpus.size() * static_cast<std::size_t>(cfg.dim));
  {
    Rng rng(derive_seed(cfg.seed, 0xD0C5));
    detail::init_uniform(sv.doc_vectors, cfg.dim, rng);
  }
  sv.rebuild_index();
  if (cfg.epochs == 0) return sv;

  const detail::IndexedCorpus indexed = detail::index_corpus(corpus, vocab);
  const NegativeTable table(vocab);
  const int dim = cfg.dim;
  EmbeddingModel& wm = sv.word_model;

  std::vector<float> h(static_cast<std::size_t>(dim));
  std::vector<float> grad_h(static_cast<std::size_t>(dim));
  std::vector<float> grad_out(static_cast<std::size_t>(dim) *
                              (1 + static_cast<std::size_t>(cfg.negatives)));
  std::vector<const float*> outs(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> labels(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> negs(static_cast<std::size_t>(cfg.negatives));

  run_epochs(indexed, cfg, vocab, sv.epoch_losses,
             [&](std::size_t si, int center, const std::vector<int>& contexts, float lr, Rng& rng,
                 double& loss, std::uint64_t& pairs) {
               float* doc = sv.doc_row(si);
               const float inv = 1.0f / static_cast<float>(contexts.size() + 1);
               for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] = doc[d];
               for (int ctx : contexts) {
                 const float* v = wm.input_row(static_cast<std::size_t>(ctx));
                 for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] += v[d];
               }
               for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] *= inv;

               const int nneg = detail::draw_negatives(table, rng, center, cfg.negatives, negs.data());
               outs[0] = wm.output_row(static_cast<std::size_t>(center));
               labels[0] = 1;
               for (int j = 0; j < nneg; ++j) {
                 outs[static_cast<std::size_t>(j + 1)] =
                     wm.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                 labels[static_cast<std::size_t>(j + 1)] = 0;
               }
               loss += ns_loss_grad<float>(h.data(), outs.data(), labels.data(), nneg + 1, dim,
                                           grad_h.data(), grad_out.data());
               ++pairs;
               float* u = wm.output_row(static_cast<std::size_t>(center));
               for (int d = 0; d < dim; ++d) u[d] -= lr * grad_out[static_cast<std::size_t>(d)];
               for (int j = 0; j < nneg; ++j) {
                 float* un = wm.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                 const float* g = grad_out.data() + static_cast<std::size_t>(j + 1) * dim;
                 for (int d = 0; d < dim; ++d) un[d] -= lr * g[d];
               }
               for (int ctx : contexts) {
                 float* v = wm.input_row(static_cast<std::size_t>(ctx));
                 for (int d = 0; d < dim; ++d) v[d] -= lr * inv * grad_h[static_cast<std::size_t>(d)];
               }
               for (int d = 0; d < dim; ++d) doc[d] -= lr * inv * grad_h[static_cast<std::size_t>(d)];
             });
  return sv;
}

// Fit a doc vector for one held-out token sequence against frozen word
// matrices. Deterministic given (seed, tokens).
inline std::vector<float> infer_sentence_vector(const SentenceVectors& sv,
                                                const std::vector<std::string>& tokens,
                                                const NegativeTable& table, const TrainConfig& cfg,
                                                int epochs, std::uint64_t seed) {
  const int dim = sv.dim;
  const EmbeddingModel& wm = sv.word_model;
  std::vector<int> sen;
  for (const std::string& tok : tokens) {
    std::ptrdiff_t idx = wm.vocab.index_of(tok);
    if (idx >= 0) sen.push_back(static_cast<int>(idx));
  }
  Rng rng(derive_seed(seed, 0x1FE2));
  std::vector<float> doc(static_cast<std::size_t>(dim));
  detail::init_uniform(doc, dim, rng);
  if (sen.empty() || epochs <= 0) return doc;

  std::vector<float> h(static_cast<std::size_t>(dim));
  std::vector<float> grad_h(static_cast<std::size_t>(dim));
  std::vector<float> grad_out(static_cast<std::size_t>(dim) *
                              (1 + static_cast<std::size_t>(cfg.negatives)));
  std::vector<const float*> outs(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> labels(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> negs(static_cast<std::size_t>(cfg.negatives));
  std::vector<int> contexts;

  const std::uint64_t planned = static_cast<std::uint64_t>(epochs) * sen.size();
  std::uint64_t step = 0;
  for (int e = 0; e < epochs; ++e) {
    for (std::size_t i = 0; i < sen.size(); ++i, ++step) {
      const float lr = std::max(
          cfg.lr_min, cfg.initial_lr * (1.0f - static_cast<float>(step) /
                                                   static_cast<float>(planned)));
      const int b = 1 + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(cfg.window)));
      contexts.clear();
      const std::ptrdiff_t pi = static_cast<std::ptrdiff_t>(i);
      for (std::ptrdiff_t j = pi - b; j <= pi + b; ++j) {
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(sen.size()) || j == pi) continue;
        contexts.push_back(sen[static_cast<std::size_t>(j)]);
      }
      const float inv = 1.0f / static_cast<float>(contexts.size() + 1);
      for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] = doc[static_cast<std::size_t>(d)];
      for (int ctx : contexts) {
        const float* v = wm.input_row(static_cast<std::size_t>(ctx));
        for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] += v[d];
      }
      for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] *= inv;

      const int center = sen[i];
      const int nneg = detail::draw_negatives(table, rng, center, cfg.negatives, negs.data());
      outs[0] = wm.output_row(static_cast<std::size_t>(center));
      labels[0] = 1;
      for (int j = 0; j < nneg; ++j) {
        outs[static_cast<std::size_t>(j + 1)] =
            wm.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
        labels[static_cast<std::size_t>(j + 1)] = 0;
      }
      ns_loss_grad<float>(h.data(), outs.data(), labels.data(), nneg + 1, dim, grad_h.data(),
                          grad_out.data());
      for (int d = 0; d < dim; ++d)
        doc[static_cast<std::size_t>(d)] -= lr * inv * grad_h[static_cast<std::size_t>(d)];
    }
  }
  return doc;
}

// Doc-vector file: "N D" header, then "id v1 .. vD" per row.
inline void save_doc_vectors(const SentenceVectors& sv, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("sentences: cannot write " + path);
  std::fprintf(f, "%zu %d\n", sv.ids.size(), sv.dim);
  for (std::size_t i = 0; i < sv.ids.size(); ++i) {
    std::fprintf(f, "%lld", static_cast<long long>(sv.ids[i]));
    const float* r = sv.doc_row(i);
    for (int d = 0; d < sv.dim; ++d) std::fprintf(f, " %.9g", r[d]);
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace twsent

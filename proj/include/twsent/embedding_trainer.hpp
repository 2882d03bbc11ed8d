#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "twsent/embedding.hpp"
#include "twsent/sampler.hpp"

namespace twsent {

// ---- negative-sampling pair loss ------------------------------------------
//
// One training event: a combined input vector h scored against one positive
// output vector and k negative ones.
//
//   L = -ln sigmoid(u_pos . h) - sum_neg ln sigmoid(-u_neg . h)
//
// Both the float training loops and the double-precision finite-difference
// checks instantiate this same kernel, so the gradient that is tested is the
// gradient that trains. Returns the loss; writes dL/dh into grad_h[0..dim)
// and dL/du_j into grad_out[j*dim ..).

template <typename S>
S ns_loss_grad(const S* h, const S* const* outs, const int* labels, int n_outs, int dim,
               S* grad_h, S* grad_out) {
  for (int d = 0; d < dim; ++d) grad_h[d] = S(0);
  S loss = S(0);
  for (int j = 0; j < n_outs; ++j) {
    const S* u = outs[j];
    S dot = S(0);
    for (int d = 0; d < dim; ++d) dot += u[d] * h[d];
    const S z = labels[j] ? dot : -dot;
    // softplus(-z) = -ln sigmoid(z), computed stably
    const S az = z < S(0) ? -z : z;
    loss += (z < S(0) ? -z : S(0)) + std::log1p(std::exp(-az));
    const S sig = S(1) / (S(1) + std::exp(-dot));
    const S g = sig - S(labels[j]);  // dL/d(u.h)
    S* gu = grad_out + static_cast<std::size_t>(j) * static_cast<std::size_t>(dim);
    for (int d = 0; d < dim; ++d) {
      gu[d] = g * h[d];
      grad_h[d] += g * u[d];
    }
  }
  return loss;
}

// ---- shared training machinery ---------------------------------------------

namespace detail {

struct IndexedCorpus {
  std::vector<std::vector<int>> sentences;  // vocab indices, OOV dropped
  std::uint64_t total_tokens = 0;
};

inline IndexedCorpus index_corpus(const std::vector<TokenSequence>& corpus,
                                  const Vocabulary& vocab) {
  IndexedCorpus out;
  out.sentences.reserve(corpus.size());
  for (const TokenSequence& seq : corpus) {
    std::vector<int> s;
    s.reserve(seq.tokens.size());
    for (const std::string& tok : seq.tokens) {
      std::ptrdiff_t idx = vocab.index_of(tok);
      if (idx >= 0) s.push_back(static_cast<int>(idx));
    }
    out.total_tokens += s.size();
    out.sentences.push_back(std::move(s));
  }
  return out;
}

inline void init_uniform(std::vector<float>& m, int dim, Rng& rng) {
  const float half = 0.5f / static_cast<float>(dim);
  for (float& x : m) x = (rng.next_float() * 2.0f - 1.0f) * half;
}

struct TrainerScratch {
  std::vector<float> h;
  std::vector<float> grad_h;
  std::vector<float> grad_out;
  std::vector<const float*> outs;
  std::vector<int> labels;
  std::vector<int> targets;
  std::vector<int> kept;
};

}  // namespace detail

// Per-sentence-position update plan shared by the three word trainers and
// the sentence-vector trainer. `Update` receives
// (sentence_index, center, contexts, lr, rng, loss, pairs).
template <typename Update>
void run_epochs(const detail::IndexedCorpus& corpus, const TrainConfig& cfg,
                const Vocabulary& vocab, std::vector<double>& epoch_losses, Update&& update) {
  const std::uint64_t planned =
      std::max<std::uint64_t>(1, corpus.total_tokens * static_cast<std::uint64_t>(cfg.epochs));
  const int threads = std::max(1, cfg.threads);
  std::atomic<std::uint64_t> processed{0};

  std::vector<double> losses(static_cast<std::size_t>(cfg.epochs), 0.0);
  std::vector<std::uint64_t> pair_counts(static_cast<std::size_t>(cfg.epochs), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::atomic<double> epoch_loss{0.0};
    std::atomic<std::uint64_t> epoch_pairs{0};

    auto worker = [&](int tid) {
      Rng rng(derive_seed(cfg.seed, 0xEB0C * static_cast<std::uint64_t>(epoch + 1) +
                                        static_cast<std::uint64_t>(tid)));
      std::vector<int> kept;
      std::vector<int> contexts;
      double local_loss = 0.0;
      std::uint64_t local_pairs = 0;

      const std::size_t n = corpus.sentences.size();
      const std::size_t lo = n * static_cast<std::size_t>(tid) / static_cast<std::size_t>(threads);
      const std::size_t hi =
          n * static_cast<std::size_t>(tid + 1) / static_cast<std::size_t>(threads);
      for (std::size_t si = lo; si < hi; ++si) {
        const std::vector<int>& sen = corpus.sentences[si];
        processed.fetch_add(sen.size(), std::memory_order_relaxed);
        kept.clear();
        for (int w : sen) {
          if (cfg.subsample_threshold > 0.0) {
            double keep = keep_probability(vocab.frequency(static_cast<std::size_t>(w)),
                                           cfg.subsample_threshold);
            if (rng.next_double() >= keep) continue;
          }
          kept.push_back(w);
        }
        if (kept.empty()) continue;
        const float progress = static_cast<float>(
            static_cast<double>(processed.load(std::memory_order_relaxed)) /
            static_cast<double>(planned));
        const float lr = std::max(cfg.lr_min, cfg.initial_lr * (1.0f - progress));
        for (std::size_t i = 0; i < kept.size(); ++i) {
          const int b = 1 + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(cfg.window)));
          contexts.clear();
          const std::ptrdiff_t pi = static_cast<std::ptrdiff_t>(i);
          for (std::ptrdiff_t j = pi - b; j <= pi + b; ++j) {
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(kept.size()) || j == pi) continue;
            contexts.push_back(kept[static_cast<std::size_t>(j)]);
          }
          double l = 0.0;
          std::uint64_t p = 0;
          update(si, kept[i], contexts, lr, rng, l, p);
          local_loss += l;
          local_pairs += p;
        }
      }
      // accumulate (relaxed; exact only in single-threaded mode, which is
      // the mode all reported numbers use)
      double cur = epoch_loss.load();
      while (!epoch_loss.compare_exchange_weak(cur, cur + local_loss)) {
      }
      epoch_pairs.fetch_add(local_pairs);
    };

    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
    losses[static_cast<std::size_t>(epoch)] = epoch_loss.load();
    pair_counts[static_cast<std::size_t>(epoch)] = epoch_pairs.load();
  }

  epoch_losses.clear();
  std::uint64_t any_pairs = 0;
  for (int e = 0; e < cfg.epochs; ++e) {
    const std::uint64_t c = pair_counts[static_cast<std::size_t>(e)];
    any_pairs += c;
    epoch_losses.push_back(c ? losses[static_cast<std::size_t>(e)] / static_cast<double>(c) : 0.0);
  }
  if (cfg.epochs > 0 && any_pairs == 0)
    std::cerr << "embedding: no training pairs were generated (corpus too small?)\n";
  for (double l : epoch_losses)
    if (!std::isfinite(l)) throw std::runtime_error("embedding: non-finite loss, lowering the learning rate should help");
}

namespace detail {

inline EmbeddingModel init_model(EmbeddingKind kind, const Vocabulary& vocab,
                                 const TrainConfig& cfg) {
  EmbeddingModel m;
  m.kind = kind;
  m.dim = cfg.dim;
  m.vocab = vocab;
  const std::size_t vd = vocab.size() * static_cast<std::size_t>(cfg.dim);
  m.input_vectors.resize(vd);
  m.output_vectors.assign(vd, 0.0f);
  Rng rng(derive_seed(cfg.seed, 0x1417));
  init_uniform(m.input_vectors, cfg.dim, rng);
  if (kind == EmbeddingKind::fasttext) {
    m.hasher.minn = cfg.minn;
    m.hasher.maxn = cfg.maxn;
    m.hasher.buckets = cfg.buckets;
    m.ngram_vectors.resize(cfg.buckets * static_cast<std::size_t>(cfg.dim));
    init_uniform(m.ngram_vectors, cfg.dim, rng);
  }
  return m;
}

// Draw negatives, skipping the positive target.
inline int draw_negatives(const NegativeTable& table, Rng& rng, int target, int k, int* out) {
  int n = 0;
  for (int i = 0; i < k; ++i) {
    int cand = static_cast<int>(table.sample(rng));
    if (cand == target) continue;
    out[n++] = cand;
  }
  return n;
}

}  // namespace detail

// Skipgram: the center word's input vector predicts each context word.
inline EmbeddingModel train_skipgram(const std::vector<TokenSequence>& corpus,
                                     const Vocabulary& vocab, const TrainConfig& cfg) {
  EmbeddingModel model = detail::init_model(EmbeddingKind::skipgram, vocab, cfg);
  if (cfg.epochs == 0) return model;
  const detail::IndexedCorpus indexed = detail::index_corpus(corpus, vocab);
  const NegativeTable table(vocab);
  const int dim = cfg.dim;

  std::vector<float> grad_h(static_cast<std::size_t>(dim));
  std::vector<float> grad_out(static_cast<std::size_t>(dim) * (1 + static_cast<std::size_t>(cfg.negatives)));
  std::vector<const float*> outs(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> labels(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> negs(static_cast<std::size_t>(cfg.negatives));

  run_epochs(indexed, cfg, vocab, model.epoch_losses,
             [&](std::size_t, int center, const std::vector<int>& contexts, float lr, Rng& rng,
                 double& loss, std::uint64_t& pairs) {
               float* h = model.input_row(static_cast<std::size_t>(center));
               for (int ctx : contexts) {
                 const int nneg = detail::draw_negatives(table, rng, ctx, cfg.negatives, negs.data());
                 outs[0] = model.output_row(static_cast<std::size_t>(ctx));
                 labels[0] = 1;
                 for (int j = 0; j < nneg; ++j) {
                   outs[static_cast<std::size_t>(j + 1)] =
                       model.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                   labels[static_cast<std::size_t>(j + 1)] = 0;
                 }
                 loss += ns_loss_grad<float>(h, outs.data(), labels.data(), nneg + 1, dim,
                                             grad_h.data(), grad_out.data());
                 ++pairs;
                 float* u = model.output_row(static_cast<std::size_t>(ctx));
                 for (int d = 0; d < dim; ++d) u[d] -= lr * grad_out[static_cast<std::size_t>(d)];
                 for (int j = 0; j < nneg; ++j) {
                   float* un =
                       model.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                   const float* g = grad_out.data() + static_cast<std::size_t>(j + 1) * dim;
                   for (int d = 0; d < dim; ++d) un[d] -= lr * g[d];
                 }
                 for (int d = 0; d < dim; ++d) h[d] -= lr * grad_h[static_cast<std::size_t>(d)];
               }
             });
  return model;
}

// CBOW: the mean of the context input vectors predicts the center word.
// The mean makes dL/dv_c = grad_h / n for each contributor; the exact
// division is applied so the trained gradient is the checked gradient.
inline EmbeddingModel train_cbow(const std::vector<TokenSequence>& corpus, const Vocabulary& vocab,
                                 const TrainConfig& cfg) {
  EmbeddingModel model = detail::init_model(EmbeddingKind::cbow, vocab, cfg);
  if (cfg.epochs == 0) return model;
  const detail::IndexedCorpus indexed = detail::index_corpus(corpus, vocab);
  const NegativeTable table(vocab);
  const int dim = cfg.dim;

  std::vector<float> h(static_cast<std::size_t>(dim));
  std::vector<float> grad_h(static_cast<std::size_t>(dim));
  std::vector<float> grad_out(static_cast<std::size_t>(dim) * (1 + static_cast<std::size_t>(cfg.negatives)));
  std::vector<const float*> outs(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> labels(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> negs(static_cast<std::size_t>(cfg.negatives));

  run_epochs(indexed, cfg, vocab, model.epoch_losses,
             [&](std::size_t, int center, const std::vector<int>& contexts, float lr, Rng& rng,
                 double& loss, std::uint64_t& pairs) {
               if (contexts.empty()) return;
               const float inv = 1.0f / static_cast<float>(contexts.size());
               for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] = 0.0f;
               for (int ctx : contexts) {
                 const float* v = model.input_row(static_cast<std::size_t>(ctx));
                 for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] += v[d];
               }
               for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] *= inv;

               const int nneg = detail::draw_negatives(table, rng, center, cfg.negatives, negs.data());
               outs[0] = model.output_row(static_cast<std::size_t>(center));
               labels[0] = 1;
               for (int j = 0; j < nneg; ++j) {
                 outs[static_cast<std::size_t>(j + 1)] =
                     model.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                 labels[static_cast<std::size_t>(j + 1)] = 0;
               }
               loss += ns_loss_grad<float>(h.data(), outs.data(), labels.data(), nneg + 1, dim,
                                           grad_h.data(), grad_out.data());
               ++pairs;
               float* u = model.output_row(static_cast<std::size_t>(center));
               for (int d = 0; d < dim; ++d) u[d] -= lr * grad_out[static_cast<std::size_t>(d)];
               for (int j = 0; j < nneg; ++j) {
                 float* un =
                     model.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                 const float* g = grad_out.data() + static_cast<std::size_t>(j + 1) * dim;
                 for (int d = 0; d < dim; ++d) un[d] -= lr * g[d];
               }
               for (int ctx : contexts) {
                 float* v = model.input_row(static_cast<std::size_t>(ctx));
                 for (int d = 0; d < dim; ++d)
                   v[d] -= lr * inv * grad_h[static_cast<std::size_t>(d)];
               }
             });
  return model;
}

// FastText: skipgram objective where h is the sum of the center word's id
// vector and its n-gram bucket vectors; every constituent receives the full
// dL/dh because h is a plain sum.
inline EmbeddingModel train_fasttext(const std::vector<TokenSequence>& corpus,
                                     const Vocabulary& vocab, const TrainConfig& cfg) {
  EmbeddingModel model = detail::init_model(EmbeddingKind::fasttext, vocab, cfg);
  if (cfg.epochs == 0) return model;
  const detail::IndexedCorpus indexed = detail::index_corpus(corpus, vocab);
  const NegativeTable table(vocab);
  const int dim = cfg.dim;

  // per-word n-gram buckets, resolved once
  std::vector<std::vector<std::size_t>> buckets(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i)
    buckets[i] = model.hasher.ngram_buckets(vocab.entry(i).token);

  std::vector<float> h(static_cast<std::size_t>(dim));
  std::vector<float> grad_h(static_cast<std::size_t>(dim));
  std::vector<float> grad_out(static_cast<std::size_t>(dim) * (1 + static_cast<std::size_t>(cfg.negatives)));
  std::vector<const float*> outs(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> labels(1 + static_cast<std::size_t>(cfg.negatives));
  std::vector<int> negs(static_cast<std::size_t>(cfg.negatives));

  run_epochs(indexed, cfg, vocab, model.epoch_losses,
             [&](std::size_t, int center, const std::vector<int>& contexts, float lr, Rng& rng,
                 double& loss, std::uint64_t& pairs) {
               const std::vector<std::size_t>& ng = buckets[static_cast<std::size_t>(center)];
               const float* wid = model.input_row(static_cast<std::size_t>(center));
               for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] = wid[d];
               for (std::size_t b : ng) {
                 const float* r = model.ngram_row(b);
                 for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] += r[d];
               }
               for (int ctx : contexts) {
                 const int nneg = detail::draw_negatives(table, rng, ctx, cfg.negatives, negs.data());
                 outs[0] = model.output_row(static_cast<std::size_t>(ctx));
                 labels[0] = 1;
                 for (int j = 0; j < nneg; ++j) {
                   outs[static_cast<std::size_t>(j + 1)] =
                       model.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                   labels[static_cast<std::size_t>(j + 1)] = 0;
                 }
                 loss += ns_loss_grad<float>(h.data(), outs.data(), labels.data(), nneg + 1, dim,
                                             grad_h.data(), grad_out.data());
                 ++pairs;
                 float* u = model.output_row(static_cast<std::size_t>(ctx));
                 for (int d = 0; d < dim; ++d) u[d] -= lr * grad_out[static_cast<std::size_t>(d)];
                 for (int j = 0; j < nneg; ++j) {
                   float* un =
                       model.output_row(static_cast<std::size_t>(negs[static_cast<std::size_t>(j)]));
                   const float* g = grad_out.data() + static_cast<std::size_t>(j + 1) * dim;
                   for (int d = 0; d < dim; ++d) un[d] -= lr * g[d];
                 }
                 float* wmut = model.input_row(static_cast<std::size_t>(center));
                 for (int d = 0; d < dim; ++d) wmut[d] -= lr * grad_h[static_cast<std::size_t>(d)];
                 for (std::size_t b : ng) {
                   float* r = model.ngram_row(b);
                   for (int d = 0; d < dim; ++d) r[d] -= lr * grad_h[static_cast<std::size_t>(d)];
                 }
                 // h is the sum of 1 + |ng| rows, each of which just moved
                 const float scale = lr * static_cast<float>(1 + ng.size());
                 for (int d = 0; d < dim; ++d)
                   h[static_cast<std::size_t>(d)] -= scale * grad_h[static_cast<std::size_t>(d)];
               }
             });
  return model;
}

}  // namespace twsent

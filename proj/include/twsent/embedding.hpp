#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twsent/ngram.hpp"
#include "twsent/vocab.hpp"

namespace twsent {

enum class EmbeddingKind : std::uint32_t { cbow = 0, skipgram = 1, fasttext = 2 };

inline const char* kind_name(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::cbow: return "cbow";
    case EmbeddingKind::skipgram: return "skipgram";
    case EmbeddingKind::fasttext: return "fasttext";
  }
  return "?";
}

inline EmbeddingKind kind_from_name(const std::string& s) {
  if (s == "cbow") return EmbeddingKind::cbow;
  if (s == "skipgram") return EmbeddingKind::skipgram;
  if (s == "fasttext") return EmbeddingKind::fasttext;
  throw std::invalid_argument("embedding: unknown kind " + s);
}

struct TrainConfig {
  int dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  float initial_lr = 0.025f;
  float lr_min = 1e-5f;
  std::uint64_t min_count = 1;
  double subsample_threshold = 1e-5;  // 0 disables
  std::uint64_t seed = 1;
  int threads = 1;
  // fasttext
  int minn = 3;
  int maxn = 6;
  std::size_t buckets = 2000000;
};

// Word representations plus the output (context) matrix the trainers need.
// For fasttext the per-word vector is reconstructed on demand as the sum of
// the word-id row and the word's hashed n-gram rows; it is never cached.
struct EmbeddingModel {
  EmbeddingKind kind = EmbeddingKind::skipgram;
  int dim = 0;
  Vocabulary vocab;
  std::vector<float> input_vectors;   // V x D
  std::vector<float> output_vectors;  // V x D
  NGramHasher hasher;                 // fasttext only
  std::vector<float> ngram_vectors;   // B x D, fasttext only
  std::vector<double> epoch_losses;   // average pair loss per epoch

  float* input_row(std::size_t i) { return input_vectors.data() + i * static_cast<std::size_t>(dim); }
  const float* input_row(std::size_t i) const {
    return input_vectors.data() + i * static_cast<std::size_t>(dim);
  }
  float* output_row(std::size_t i) {
    return output_vectors.data() + i * static_cast<std::size_t>(dim);
  }
  const float* output_row(std::size_t i) const {
    return output_vectors.data() + i * static_cast<std::size_t>(dim);
  }
  float* ngram_row(std::size_t b) { return ngram_vectors.data() + b * static_cast<std::size_t>(dim); }
  const float* ngram_row(std::size_t b) const {
    return ngram_vectors.data() + b * static_cast<std::size_t>(dim);
  }

  bool resolvable(const std::string& word) const {
    return kind == EmbeddingKind::fasttext || vocab.contains(word);
  }

  // Composes into a caller buffer of dim floats; OOV composes from n-grams
  // for fasttext and throws otherwise.
  void word_vector_into(const std::string& word, float* out) const {
    for (int d = 0; d < dim; ++d) out[d] = 0.0f;
    if (kind == EmbeddingKind::fasttext) {
      std::ptrdiff_t idx = vocab.index_of(word);
      if (idx >= 0) {
        const float* r = input_row(static_cast<std::size_t>(idx));
        for (int d = 0; d < dim; ++d) out[d] += r[d];
      }
      for (std::size_t b : hasher.ngram_buckets(word)) {
        const float* r = ngram_row(b);
        for (int d = 0; d < dim; ++d) out[d] += r[d];
      }
      return;
    }
    std::ptrdiff_t idx = vocab.index_of(word);
    if (idx < 0) throw std::out_of_range("embedding: out of vocabulary: " + word);
    const float* r = input_row(static_cast<std::size_t>(idx));
    std::copy(r, r + dim, out);
  }

  std::vector<float> word_vector(const std::string& word) const {
    std::vector<float> v(static_cast<std::size_t>(dim), 0.0f);
    if (kind == EmbeddingKind::fasttext) {
      std::ptrdiff_t idx = vocab.index_of(word);
      if (idx >= 0) {
        const float* r = input_row(static_cast<std::size_t>(idx));
        for (int d = 0; d < dim; ++d) v[static_cast<std::size_t>(d)] += r[d];
      }
      for (std::size_t b : hasher.ngram_buckets(word)) {
        const float* r = ngram_row(b);
        for (int d = 0; d < dim; ++d) v[static_cast<std::size_t>(d)] += r[d];
      }
      return v;
    }
    std::ptrdiff_t idx = vocab.index_of(word);
    if (idx < 0) throw std::out_of_range("embedding: out of vocabulary: " + word);
    const float* r = input_row(static_cast<std::size_t>(idx));
    std::copy(r, r + dim, v.begin());
    return v;
  }
};

inline double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Top-k vocabulary words by cosine similarity to the query, query excluded.
inline std::vector<std::pair<std::string, double>> most_similar(const EmbeddingModel& model,
                                                                const std::string& word,
                                                                std::size_t k) {
  std::vector<float> q = model.word_vector(word);
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(model.vocab.size());
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    const std::string& w = model.vocab.entry(i).token;
    if (w == word) continue;
    scored.emplace_back(w, cosine(q, model.word_vector(w)));
  }
  std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                    });
  scored.resize(keep);
  return scored;
}

// ---- interchange formats ---------------------------------------------------

// Text format: "V D" header then one "word v1 .. vD" line per word.
// %.9g prints binary32 exactly, so export -> import is lossless.
inline void save_vec_text(const EmbeddingModel& model, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("embedding: cannot write " + path);
  std::fprintf(f, "%zu %d\n", model.vocab.size(), model.dim);
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    std::fputs(model.vocab.entry(i).token.c_str(), f);
    std::vector<float> v = model.word_vector(model.vocab.entry(i).token);
    for (int d = 0; d < model.dim; ++d) std::fprintf(f, " %.9g", v[static_cast<std::size_t>(d)]);
    std::fputc('\n', f);
  }
  std::fclose(f);
}

struct VecTable {
  int dim = 0;
  std::vector<std::string> words;
  std::vector<float> vectors;  // V x D

  const float* row(std::size_t i) const { return vectors.data() + i * static_cast<std::size_t>(dim); }
};

inline VecTable load_vec_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("embedding: cannot open " + path);
  VecTable t;
  std::size_t v = 0;
  if (!(in >> v >> t.dim) || t.dim <= 0) throw std::runtime_error("embedding: bad .vec header");
  t.words.resize(v);
  t.vectors.resize(v * static_cast<std::size_t>(t.dim));
  for (std::size_t i = 0; i < v; ++i) {
    if (!(in >> t.words[i])) throw std::runtime_error("embedding: truncated .vec file");
    for (int d = 0; d < t.dim; ++d)
      if (!(in >> t.vectors[i * static_cast<std::size_t>(t.dim) + static_cast<std::size_t>(d)]))
        throw std::runtime_error("embedding: truncated .vec file");
  }
  return t;
}

// Binary model format, little-endian throughout.
inline constexpr std::uint32_t kEmbeddingMagic = 0x54574556;  // "TWEV"
inline constexpr std::uint32_t kEmbeddingVersion = 1;

namespace detail {
template <typename T>
void put(std::ofstream& o, const T& v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void get(std::ifstream& i, T& v) {
  i.read(reinterpret_cast<char*>(&v), sizeof(T));
}
inline void put_string(std::ofstream& o, const std::string& s) {
  put(o, static_cast<std::uint32_t>(s.size()));
  o.write(s.data(), static_cast<std::streamsize>(s.size()));
}
inline std::string get_string(std::ifstream& i) {
  std::uint32_t n = 0;
  get(i, n);
  std::string s(n, '\0');
  i.read(s.data(), n);
  return s;
}
}  // namespace detail

inline void save_model_binary(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("embedding: cannot write " + path);
  detail::put(out, kEmbeddingMagic);
  detail::put(out, kEmbeddingVersion);
  detail::put(out, static_cast<std::uint32_t>(model.kind));
  detail::put(out, static_cast<std::uint32_t>(model.dim));
  detail::put(out, static_cast<std::uint64_t>(model.vocab.size()));
  detail::put(out, static_cast<std::uint64_t>(model.hasher.buckets));
  detail::put(out, static_cast<std::int32_t>(model.hasher.minn));
  detail::put(out, static_cast<std::int32_t>(model.hasher.maxn));
  detail::put(out, model.vocab.min_count());
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    detail::put_string(out, model.vocab.entry(i).token);
    detail::put(out, model.vocab.entry(i).count);
  }
  auto put_floats = [&](const std::vector<float>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(float)));
  };
  put_floats(model.input_vectors);
  put_floats(model.output_vectors);
  if (model.kind == EmbeddingKind::fasttext) put_floats(model.ngram_vectors);
  if (!out) throw std::runtime_error("embedding: write failed for " + path);
}

inline EmbeddingModel load_model_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("embedding: cannot open " + path);
  std::uint32_t magic = 0, version = 0, kind = 0, dim = 0;
  std::uint64_t vsize = 0, buckets = 0, min_count = 1;
  std::int32_t minn = 3, maxn = 6;
  detail::get(in, magic);
  if (magic != kEmbeddingMagic) throw std::runtime_error("embedding: bad magic in " + path);
  detail::get(in, version);
  if (version != kEmbeddingVersion) throw std::runtime_error("embedding: unsupported version");
  detail::get(in, kind);
  detail::get(in, dim);
  detail::get(in, vsize);
  detail::get(in, buckets);
  detail::get(in, minn);
  detail::get(in, maxn);
  detail::get(in, min_count);

  std::vector<Vocabulary::Entry> entries;
  entries.reserve(vsize);
  for (std::uint64_t i = 0; i < vsize; ++i) {
    std::string w = detail::get_string(in);
    std::uint64_t c = 0;
    detail::get(in, c);
    entries.push_back(Vocabulary::Entry{std::move(w), c});
  }

  EmbeddingModel model;
  model.kind = static_cast<EmbeddingKind>(kind);
  model.dim = static_cast<int>(dim);
  model.vocab = Vocabulary::from_entries(std::move(entries), min_count);
  model.hasher.minn = minn;
  model.hasher.maxn = maxn;
  model.hasher.buckets = buckets;
  auto get_floats = [&](std::vector<float>& v, std::size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(float)));
  };
  const std::size_t vd = static_cast<std::size_t>(vsize) * dim;
  get_floats(model.input_vectors, vd);
  get_floats(model.output_vectors, vd);
  if (model.kind == EmbeddingKind::fasttext)
    get_floats(model.ngram_vectors, static_cast<std::size_t>(buckets) * dim);
  if (!in) throw std::runtime_error("embedding: truncated model file " + path);
  return model;
}

}  // namespace twsent

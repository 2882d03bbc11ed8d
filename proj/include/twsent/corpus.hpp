#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twsent/csv.hpp"
#include "twsent/errors.hpp"
#include "twsent/rng.hpp"

namespace twsent {

struct Tweet {
  std::int64_t id = 0;  // row ordinal in the source file
  std::string text;
  int label = 0;  // 0 = negative, 1 = positive
};

struct CsvSchema {
  std::string text_column = "SentimentText";
  std::string label_column = "Sentiment";
};

struct LoadResult {
  std::vector<Tweet> tweets;
  std::size_t skipped = 0;  // malformed / out-of-domain rows
};

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace detail

// Reads the labeled tweet CSV. One Tweet per data row, ids assigned by row
// order. Ragged rows, empty texts and labels outside {0,1} are skipped and
// counted rather than treated as fatal; the public dataset has such rows.
inline LoadResult load_csv(const std::string& path, const CsvSchema& schema = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("corpus: cannot open " + path);
  CsvReader reader(in);

  auto header = reader.next_row();
  if (!header) throw ConfigError("corpus: empty file " + path);
  std::ptrdiff_t text_idx = -1, label_idx = -1;
  for (std::size_t i = 0; i < header->size(); ++i) {
    const std::string col = detail::trim((*header)[i]);
    if (col == schema.text_column) text_idx = static_cast<std::ptrdiff_t>(i);
    if (col == schema.label_column) label_idx = static_cast<std::ptrdiff_t>(i);
  }
  if (text_idx < 0) throw ConfigError("corpus: missing column " + schema.text_column);
  if (label_idx < 0) throw ConfigError("corpus: missing column " + schema.label_column);

  LoadResult out;
  std::int64_t id = 0;
  while (auto row = reader.next_row()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;  // blank line
    const std::size_t need = static_cast<std::size_t>(std::max(text_idx, label_idx)) + 1;
    if (row->size() < need) {
      ++out.skipped;
      ++id;
      continue;
    }
    const std::string label_s = detail::trim((*row)[static_cast<std::size_t>(label_idx)]);
    const std::string text = (*row)[static_cast<std::size_t>(text_idx)];
    if ((label_s != "0" && label_s != "1") || detail::trim(text).empty()) {
      ++out.skipped;
      ++id;
      continue;
    }
    out.tweets.push_back(Tweet{id, text, label_s == "1" ? 1 : 0});
    ++id;
  }
  if (out.tweets.empty()) throw ConfigError("corpus: zero valid rows in " + path);
  return out;
}

// Seeded uniform draw of floor(fraction*N) tweets without replacement,
// order of the survivors preserved.
inline std::vector<Tweet> subsample(const std::vector<Tweet>& tweets, double fraction,
                                    std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("corpus: fraction must be in (0,1]");
  if (fraction == 1.0) return tweets;
  const std::size_t n = tweets.size();
  const std::size_t k = static_cast<std::size_t>(fraction * static_cast<double>(n));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed(seed, 0x5ab5));
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_index(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<Tweet> out;
  out.reserve(k);
  for (std::size_t i : idx) out.push_back(tweets[i]);
  return out;
}

struct DatasetSplit {
  std::vector<Tweet> train;
  std::vector<Tweet> test;
  std::uint64_t seed = 0;
  double fraction = 1.0;  // the subsample fraction that produced the input
  double ratio = 0.7;
};

// 7:3-by-default split. With stratify on, per-class proportions are
// preserved within one item; that is the default because the paper's
// reported train counts are near-balanced.
inline DatasetSplit split(const std::vector<Tweet>& tweets, double ratio, std::uint64_t seed,
                          bool stratify = true, double fraction = 1.0) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("corpus: ratio must be in (0,1)");
  DatasetSplit out;
  out.seed = seed;
  out.fraction = fraction;
  out.ratio = ratio;

  auto shuffle_ids = [&](std::vector<std::size_t>& v, std::uint64_t stream) {
    Rng rng(derive_seed(seed, stream));
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng.next_index(i));
      std::swap(v[i - 1], v[j]);
    }
  };

  std::vector<std::size_t> train_idx, test_idx;
  if (stratify) {
    for (int label : {0, 1}) {
      std::vector<std::size_t> cls;
      for (std::size_t i = 0; i < tweets.size(); ++i)
        if (tweets[i].label == label) cls.push_back(i);
      if (cls.empty())
        throw std::runtime_error("corpus: class " + std::to_string(label) +
                                 " absent, cannot stratify");
      shuffle_ids(cls, 0x5704 + static_cast<std::uint64_t>(label));
      std::size_t k = static_cast<std::size_t>(ratio * static_cast<double>(cls.size()) + 0.5);
      k = std::min(k, cls.size());
      train_idx.insert(train_idx.end(), cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(k));
      test_idx.insert(test_idx.end(), cls.begin() + static_cast<std::ptrdiff_t>(k), cls.end());
    }
  } else {
    std::vector<std::size_t> all(tweets.size());
    std::iota(all.begin(), all.end(), 0);
    shuffle_ids(all, 0x5704);
    std::size_t k = static_cast<std::size_t>(ratio * static_cast<double>(all.size()) + 0.5);
    train_idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    test_idx.assign(all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  for (std::size_t i : train_idx) out.train.push_back(tweets[i]);
  for (std::size_t i : test_idx) out.test.push_back(tweets[i]);
  return out;
}

// ---- manifest / summary serialization -------------------------------------

inline void write_split_manifest(const DatasetSplit& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("corpus: cannot write " + path);
  out << "id,partition\n";
  for (const Tweet& t : s.train) out << t.id << ",train\n";
  for (const Tweet& t : s.test) out << t.id << ",test\n";
}

inline void write_split_summary(const DatasetSplit& s, const std::string& path) {
  auto count = [](const std::vector<Tweet>& v, int label) {
    return std::count_if(v.begin(), v.end(), [&](const Tweet& t) { return t.label == label; });
  };
  nlohmann::json j;
  j["seed"] = s.seed;
  j["fraction"] = s.fraction;
  j["ratio"] = s.ratio;
  j["train"] = {{"total", s.train.size()},
                {"positive", count(s.train, 1)},
                {"negative", count(s.train, 0)}};
  j["test"] = {{"total", s.test.size()},
               {"positive", count(s.test, 1)},
               {"negative", count(s.test, 0)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("corpus: cannot write " + path);
  out << j.dump(2) << "\n";
}

// FNV-1a over a file's bytes; reports embed this so tables cannot silently
// mix datasets.
inline std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("corpus: cannot open " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 15];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace twsent

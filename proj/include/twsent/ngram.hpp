#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twsent {

// Character n-grams of "<word>" hashed into a fixed bucket range.
// FNV-1a over the n-gram bytes, reduced modulo the bucket count.
struct NGramHasher {
  int minn = 3;
  int maxn = 6;
  std::size_t buckets = 2000000;

  static std::uint64_t fnv1a(const char* data, std::size_t len) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 1099511628211ULL;
    }
    return h;
  }

  std::size_t bucket_of(const std::string& ngram) const {
    return static_cast<std::size_t>(fnv1a(ngram.data(), ngram.size()) % buckets);
  }

  // All substrings of "<word>" with length in [minn, maxn].
  std::vector<std::string> ngrams(const std::string& word) const {
    const std::string wrapped = "<" + word + ">";
    std::vector<std::string> out;
    for (std::size_t start = 0; start < wrapped.size(); ++start) {
      for (int n = minn; n <= maxn; ++n) {
        if (start + static_cast<std::size_t>(n) > wrapped.size()) break;
        out.push_back(wrapped.substr(start, static_cast<std::size_t>(n)));
      }
    }
    return out;
  }

  std::vector<std::size_t> ngram_buckets(const std::string& word) const {
    std::vector<std::size_t> out;
    for (const std::string& g : ngrams(word)) out.push_back(bucket_of(g));
    return out;
  }
};

}  // namespace twsent

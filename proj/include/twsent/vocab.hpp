#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "twsent/preprocess.hpp"

namespace twsent {

// Token inventory with dense indices. Order is descending count with
// lexicographic tie-break, so the index assignment is a pure function of
// the corpus.
class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::uint64_t count = 0;
  };

  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::uint64_t min_count() const { return min_count_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& entry(std::size_t idx) const { return entries_[idx]; }

  // -1 when absent.
  std::ptrdiff_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }
  bool contains(const std::string& token) const { return index_.count(token) > 0; }

  // Corpus frequency of entry idx, over counted tokens.
  double frequency(std::size_t idx) const {
    return static_cast<double>(entries_[idx].count) / static_cast<double>(total_tokens_);
  }

  // Rebuild from persisted entries; applies the same deterministic order
  // as build() so matrix rows stay aligned.
  static Vocabulary from_entries(std::vector<Entry> entries, std::uint64_t min_count = 1) {
    if (entries.empty()) throw std::runtime_error("vocab: empty vocabulary");
    Vocabulary v;
    v.min_count_ = min_count;
    v.entries_ = std::move(entries);
    std::sort(v.entries_.begin(), v.entries_.end(), [](const Entry& a, const Entry& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.token < b.token;
    });
    for (std::size_t i = 0; i < v.entries_.size(); ++i) {
      v.index_[v.entries_[i].token] = i;
      v.total_tokens_ += v.entries_[i].count;
    }
    return v;
  }

  static Vocabulary build(const std::vector<TokenSequence>& corpus, std::uint64_t min_count = 1) {
    if (corpus.empty()) throw std::invalid_argument("vocab: empty corpus");
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const TokenSequence& seq : corpus)
      for (const std::string& tok : seq.tokens) ++counts[tok];

    Vocabulary v;
    v.min_count_ = min_count;
    for (auto& [tok, cnt] : counts)
      if (cnt >= min_count) v.entries_.push_back(Entry{tok, cnt});
    if (v.entries_.empty()) throw std::runtime_error("vocab: empty vocabulary after filtering");
    std::sort(v.entries_.begin(), v.entries_.end(), [](const Entry& a, const Entry& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.token < b.token;
    });
    for (std::size_t i = 0; i < v.entries_.size(); ++i) {
      v.index_[v.entries_[i].token] = i;
      v.total_tokens_ += v.entries_[i].count;
    }
    return v;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t min_count_ = 1;
};

}  // namespace twsent

#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twsent/corpus.hpp"
#include "twsent/lemmatizer.hpp"

namespace twsent {

struct TokenSequence {
  std::int64_t source_id = -1;
  std::vector<std::string> tokens;
};

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alnum(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_handle_char(char c) { return is_alnum(c) || c == '_'; }

inline bool matches_at(const std::string& s, std::size_t i, const char* lit) {
  for (std::size_t k = 0; lit[k]; ++k) {
    if (i + k >= s.size()) return false;
    char c = s[i + k];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != lit[k]) return false;
  }
  return true;
}

}  // namespace detail

// The three cleaning rules, applied URL -> handle -> number and then
// lowercased. URLs go first because they contain digits and sometimes '@'.
// A standalone single digit 0/1/2 is left alone: those are the sentinels
// the rules emit, which is what makes clean(clean(x)) == clean(x).
inline std::string clean(const std::string& text) {
  using namespace detail;
  std::string s;
  s.reserve(text.size());

  // URLs -> "2"
  for (std::size_t i = 0; i < text.size();) {
    std::size_t pref = 0;
    if (matches_at(text, i, "http://"))
      pref = 7;
    else if (matches_at(text, i, "https://"))
      pref = 8;
    else if (matches_at(text, i, "www."))
      pref = 4;
    if (pref > 0) {
      std::size_t j = i + pref;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      s += '2';
      i = j;
    } else {
      s += text[i++];
    }
  }

  // handles -> "1"
  std::string t;
  t.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '@' && i + 1 < s.size() && is_handle_char(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && is_handle_char(s[j])) ++j;
      t += '1';
      i = j;
    } else {
      t += s[i++];
    }
  }

  // digit runs -> "0"
  std::string u;
  u.reserve(t.size());
  for (std::size_t i = 0; i < t.size();) {
    if (is_digit(t[i])) {
      std::size_t j = i;
      while (j < t.size() && is_digit(t[j])) ++j;
      const bool left_free = (i == 0) || !is_alnum(t[i - 1]);
      const bool right_free = (j == t.size()) || !is_alnum(t[j]);
      const bool sentinel =
          (j - i == 1) && left_free && right_free && (t[i] == '0' || t[i] == '1' || t[i] == '2');
      if (sentinel)
        u += t[i];
      else
        u += '0';
      i = j;
    } else {
      u += t[i++];
    }
  }

  for (char& c : u)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return u;
}

// Tokens are maximal runs of [a-z 0-2 '] with leading/trailing apostrophes
// stripped; anything else is a non-word token and is dropped.
inline std::vector<std::string> tokenize(const std::string& cleaned) {
  auto is_token_char = [](char c) {
    return (c >= 'a' && c <= 'z') || c == '0' || c == '1' || c == '2' || c == '\'';
  };
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cleaned.size();) {
    if (!is_token_char(cleaned[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cleaned.size() && is_token_char(cleaned[j])) ++j;
    std::size_t a = i, b = j;
    while (a < b && cleaned[a] == '\'') ++a;
    while (b > a && cleaned[b - 1] == '\'') --b;
    if (b > a) out.push_back(cleaned.substr(a, b - a));
    i = j;
  }
  return out;
}

inline TokenSequence preprocess_pipeline(const Tweet& tweet, const Lemmatizer& lemmatizer) {
  TokenSequence seq;
  seq.source_id = tweet.id;
  for (const std::string& tok : tokenize(clean(tweet.text)))
    seq.tokens.push_back(lemmatizer.lemma(tok));
  return seq;
}

// ---- token cache: one line per tweet, id<TAB>token token token... ---------

inline void write_token_cache(const std::vector<TokenSequence>& seqs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("preprocess: cannot write " + path);
  for (const TokenSequence& s : seqs) {
    out << s.source_id << '\t';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) out << ' ';
      out << s.tokens[i];
    }
    out << '\n';
  }
}

inline std::vector<TokenSequence> read_token_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("preprocess: cannot open " + path);
  std::vector<TokenSequence> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("preprocess: bad cache line");
    TokenSequence seq;
    seq.source_id = std::stoll(line.substr(0, tab));
    std::istringstream toks(line.substr(tab + 1));
    std::string tok;
    while (toks >> tok) seq.tokens.push_back(tok);
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace twsent

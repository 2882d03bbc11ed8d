#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twsent/csv.hpp"
#include "twsent/rng.hpp"

namespace twsent {

// Deterministic labeled-tweet generator. The public corpus the pipeline was
// designed for is not redistributable, so this produces a stand-in with the
// same surface features (handles, URLs, numbers, elongated misspellings,
// contractions, heavy punctuation) and a label structure that rewards
// order-aware models:
//
//   * "simple" tweets carry 1-3 sentiment words of one polarity anywhere;
//   * "contrast" tweets open with one polarity and flip after "but"; the
//     label follows the final clause. The two clauses are distribution-
//     identical, so bag-of-words features carry no signal on them, and the
//     clauses are kept long enough that no 9-token window spans both.
class SyntheticCorpus {
 public:
  explicit SyntheticCorpus(std::uint64_t seed) : rng_(derive_seed(seed, 0x5e9e)) {}

  struct Row {
    std::string text;
    int label = 0;
  };

  Row next() {
    Row row;
    row.label = rng_.next_bool(0.5) ? 1 : 0;
    current_topic_ = rng_.next_index(topic_pools().size());
    const bool contrast = rng_.next_bool(0.38);
    std::vector<std::string> tokens;
    if (rng_.next_bool(0.15)) tokens.push_back(handle());
    if (contrast)
      build_contrast(tokens, row.label);
    else
      build_simple(tokens, row.label);
    if (rng_.next_bool(0.06)) tokens.push_back(url());
    if (rng_.next_bool(0.002)) {  // rare over-length tail
      const int extra = 60 + rng_.next_int(0, 40);
      for (int i = 0; i < extra; ++i) tokens.push_back(filler());
    }
    row.text = join(tokens);
    return row;
  }

  void write_csv(const std::string& path, std::size_t rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("synthetic: cannot write " + path);
    out << "ItemID,Sentiment,SentimentText\n";
    for (std::size_t i = 0; i < rows; ++i) {
      Row r = next();
      out << (i + 1) << ',' << r.label << ',' << csv_escape(r.text) << '\n';
    }
  }

 private:
  Rng rng_;
  std::size_t current_topic_ = 0;

  static const std::vector<std::string>& positive_pool() {
    static const std::vector<std::string> v = {
        "good",   "great",    "nice",  "goood",   "gud",    "awesome", "amazing", "happy",
        "love",   "lovely",   "cool",  "sweet",   "fun",    "wonderful", "best",  "cute",
        "excited", "glad",    "perfect", "beautiful", "brilliant", "fab", "yay",  "joy",
        "blessed", "winning", "super", "rad",     "stoked", "proud"};
    return v;
  }
  static const std::vector<std::string>& negative_pool() {
    static const std::vector<std::string> v = {
        "bad",   "sad",      "awful", "terrible", "horrible", "hate",  "angry",    "mad",
        "worst", "sucks",    "sucky", "gross",    "annoying", "upset", "sick",     "tired",
        "bored", "fail",     "ugh",   "meh",      "baad",     "badd",  "nasty",    "poor",
        "wrong", "hurt",     "cry",   "crying",   "miserable", "rubbish"};
    return v;
  }
  // function words shared by every tweet
  static const std::vector<std::string>& common_pool() {
    static const std::vector<std::string> v = {
        "i",    "you",  "the",  "a",     "to",    "and",   "my",    "is",   "it",
        "me",   "so",   "for",  "of",    "in",    "on",    "im",    "that", "this",
        "with", "was",  "at",   "just",  "have",  "be",    "am",    "are",  "we",
        "she",  "he",   "her",  "got",   "get",   "go",    "out",   "up",   "back",
        "now",  "then", "when", "what",  "all",   "some",  "one",   "from", "here",
        "there", "know", "see",  "want",  "gonna", "really", "yeah", "still"};
    return v;
  }

  // topical sub-pools; each tweet sticks to one topic, the way real tweets
  // stay on subject, which is what gives the embedding objective structure
  // to keep learning across epochs
  static const std::vector<std::vector<std::string>>& topic_pools() {
    static const std::vector<std::vector<std::string>> v = {
        {"coffee", "tea", "lunch", "dinner", "breakfast", "pizza", "cake", "hungry", "cooking",
         "recipe"},
        {"song", "music", "album", "band", "concert", "guitar", "singing", "playlist", "radio",
         "dance"},
        {"school", "class", "homework", "exam", "teacher", "study", "college", "essay",
         "library", "grades"},
        {"work", "office", "boss", "meeting", "shift", "monday", "deadline", "email", "desk",
         "coworker"},
        {"mom", "dad", "sister", "brother", "family", "grandma", "cousin", "aunt", "uncle",
         "kids"},
        {"game", "team", "football", "match", "score", "season", "coach", "win", "league",
         "practice"},
        {"rain", "sunny", "weather", "snow", "storm", "cold", "warm", "cloudy", "wind",
         "umbrella"},
        {"trip", "flight", "beach", "hotel", "vacation", "airport", "drive", "road", "city",
         "train"},
        {"movie", "show", "episode", "sequel", "actor", "netflix", "cinema", "trailer",
         "series", "scene"},
        {"phone", "laptop", "internet", "app", "battery", "screen", "charger", "update",
         "wifi", "download"},
        {"dog", "cat", "puppy", "kitten", "vet", "walk", "fur", "paw", "treat", "leash"},
        {"dress", "shoes", "shopping", "outfit", "hair", "nails", "jeans", "jacket", "style",
         "makeup"}};
    return v;
  }
  static const std::vector<std::string>& intensifier_pool() {
    static const std::vector<std::string> v = {"so", "really", "very", "totally", "pretty",
                                               "kinda"};
    return v;
  }
  static const std::vector<std::string>& contraction_pool() {
    static const std::vector<std::string> v = {"i'm",   "don't", "can't", "it's",  "that's",
                                               "you're", "didn't", "isn't", "hasn't", "won't"};
    return v;
  }

  std::string filler() {
    // heavy tail of rare forms, like a real tweet corpus: elongations,
    // fat-finger typos and topical pseudo-words that mostly occur once
    if (rng_.next_bool(0.004)) return rare_word();
    std::string w;
    if (rng_.next_bool(0.45)) {
      const auto& pool = topic_pools()[current_topic_];
      w = pool[rng_.next_index(pool.size())];
    } else {
      const auto& pool = common_pool();
      // zipf-ish: bias toward the front of the pool
      const double u = rng_.next_double();
      const std::size_t idx = static_cast<std::size_t>(u * u * static_cast<double>(pool.size()));
      w = pool[std::min(idx, pool.size() - 1)];
    }
    if (rng_.next_bool(0.012) && w.size() >= 3) {
      const std::size_t pos = w.size() - 2;
      w.insert(pos, std::string(static_cast<std::size_t>(rng_.next_int(1, 3)), w[pos]));
    } else if (rng_.next_bool(0.008) && w.size() >= 4) {
      w[rng_.next_index(w.size())] = static_cast<char>('a' + rng_.next_index(26));
    }
    return w;
  }

  std::string rare_word() {
    static const char* syllables[] = {"ba", "ke", "ri", "to", "mu", "la", "so", "ne",
                                      "vi", "da", "po", "ch", "an", "el", "or", "is"};
    std::string w;
    const int n = rng_.next_int(3, 4);
    for (int i = 0; i < n; ++i) w += syllables[rng_.next_index(16)];
    return w;
  }

  std::string sentiment_word(int polarity) {
    const auto& pool = polarity == 1 ? positive_pool() : negative_pool();
    std::string w = pool[rng_.next_index(pool.size())];
    if (rng_.next_bool(0.06) && w.size() >= 3) {  // elongation typo
      const std::size_t pos = w.size() - 2;
      const int reps = rng_.next_int(1, 3);
      w.insert(pos, std::string(static_cast<std::size_t>(reps), w[pos]));
    }
    return w;
  }

  std::string handle() {
    static const char* names[] = {"@mike",    "@sarah",  "@jess",   "@tom",  "@emma",
                                  "@dave",    "@laura",  "@chris",  "@katie", "@alexx"};
    std::string h = names[rng_.next_index(10)];
    if (rng_.next_bool(0.4)) h += std::to_string(rng_.next_index(100));
    return h;
  }

  std::string url() {
    static const char* hosts[] = {"http://twitpic.com/", "http://bit.ly/", "http://tinyurl.com/",
                                  "www.example.com/"};
    std::string u = hosts[rng_.next_index(4)];
    for (int i = 0; i < 5; ++i)
      u += static_cast<char>('a' + static_cast<char>(rng_.next_index(26)));
    return u;
  }

  std::string punct() {
    static const char* marks[] = {".", "!", "!!", "...", "?", "?!", "!!!"};
    return marks[rng_.next_index(7)];
  }

  void append_phrase(std::vector<std::string>& tokens, int count) {
    for (int i = 0; i < count; ++i) {
      if (rng_.next_bool(0.08))
        tokens.push_back(contraction_pool()[rng_.next_index(contraction_pool().size())]);
      else if (rng_.next_bool(0.04))
        tokens.push_back(std::to_string(rng_.next_index(2000)));
      else
        tokens.push_back(filler());
    }
  }

  void append_sentiment(std::vector<std::string>& tokens, int polarity) {
    if (rng_.next_bool(0.45))
      tokens.push_back(intensifier_pool()[rng_.next_index(intensifier_pool().size())]);
    tokens.push_back(sentiment_word(polarity));
  }

  void build_simple(std::vector<std::string>& tokens, int label) {
    const int words = rng_.next_int(1, 3);
    const int total_filler = rng_.next_int(5, 22);
    const int segments = words + 1;
    for (int s = 0; s < segments; ++s) {
      append_phrase(tokens, total_filler / segments + (s == 0 ? total_filler % segments : 0));
      if (s < words) {
        append_sentiment(tokens, label);
        if (rng_.next_bool(0.3)) tokens.back() += punct();
      }
    }
  }

  // Opposite-polarity opener, then "but", then the labeling clause. Every
  // sentiment position sits >= 9 tokens from the other clause, from "but"
  // AND from both content boundaries. Width-9 receptive fields therefore
  // never see two clauses at once, never see a sentiment word next to the
  // pre-padding zeros, and never have their window offsets clipped by the
  // sequence end: a pooled convolution gets no positional purchase and the
  // clause order is only visible to models that read order.
  void build_contrast(std::vector<std::string>& tokens, int label) {
    const int opener = 1 - label;
    const int a_words = rng_.next_int(1, 2);
    const int b_words = rng_.next_int(1, 2);
    append_phrase(tokens, rng_.next_int(9, 14));
    for (int i = 0; i < a_words; ++i) append_sentiment(tokens, opener);
    if (rng_.next_bool(0.4)) tokens.back() += punct();
    append_phrase(tokens, rng_.next_int(8, 15));
    tokens.push_back("but");
    append_phrase(tokens, rng_.next_int(8, 15));
    for (int i = 0; i < b_words; ++i) append_sentiment(tokens, label);
    if (rng_.next_bool(0.5)) tokens.back() += punct();
    append_phrase(tokens, rng_.next_int(9, 14));
  }

  static std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    return out;
  }
};

}  // namespace twsent

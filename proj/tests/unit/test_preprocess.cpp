#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "twsent/corpus.hpp"
#include "twsent/preprocess.hpp"

using namespace twsent;

namespace {
std::string fixture(const std::string& name) { return std::string(TWSENT_FIXTURE_DIR) + "/" + name; }

// Table 1 inputs and their cleaned forms. Input punctuation is preserved
// verbatim; the published table's en-dash and curly quotes are typesetting
// artifacts.
const std::pair<const char*, const char*> kCleanCases[] = {
    {"@scoutout You reminded me of Ralph S. Mouse. If you read Beverly Cleary, you know who I'm "
     "talking about.",
     "1 you reminded me of ralph s. mouse. if you read beverly cleary, you know who i'm talking "
     "about."},
    {"cryinnnnng---------- so sadd ........... .. i cant lifee.............i hate my lifeee...!! "
     "i can't stop....!!! plzz i need helpp",
     "cryinnnnng---------- so sadd ........... .. i cant lifee.............i hate my "
     "lifeee...!! i can't stop....!!! plzz i need helpp"},
    {"my cat is happy so she's drooling from 3 places of her mouth. I love felix",
     "my cat is happy so she's drooling from 0 places of her mouth. i love felix"},
    {"@joyce_ap ive been to cebu and bohol na.", "1 ive been to cebu and bohol na."},
    {"@RHEAAAxx i feel cool. i'm the only non asian person you're following.",
     "1 i feel cool. i'm the only non asian person you're following."},
    {"i have nothing to do until thursday WHYY OH WHYY MEEEE?!",
     "i have nothing to do until thursday whyy oh whyy meeee?!"},
    {"http://www.bizjournals.com/portland/stories/2009/06/01/daily38.html maybe it's time to "
     "start looking east",
     "2 maybe it's time to start looking east"},
    {"http://twitpic.com/65v9u - Awwww well aren't we just hella cute",
     "2 - awwww well aren't we just hella cute"},
};
}  // namespace

TEST_CASE("clean reproduces every published sample row exactly") {
  for (const auto& [raw, want] : kCleanCases) CHECK(clean(raw) == want);
}

TEST_CASE("clean is idempotent on the sample rows") {
  for (const auto& [raw, want] : kCleanCases) {
    const std::string once = clean(raw);
    CHECK(clean(once) == once);
  }
}

TEST_CASE("clean replacement rules") {
  CHECK(clean("see https://a.b/c?d=1 now") == "see 2 now");
  CHECK(clean("www.example.com rocks") == "2 rocks");
  CHECK(clean("@a_b9 hi") == "1 hi");
  CHECK(clean("gr8 b4 2009") == "gr0 b0 0");
  CHECK(clean("HELLO") == "hello");
  // sentinels already in cleaned text stay put
  CHECK(clean("1 you reminded me") == "1 you reminded me");
  CHECK(clean("2 - awwww") == "2 - awwww");
}

TEST_CASE("cleaned text carries no handles, urls, uppercase or fresh digit runs") {
  const char* raws[] = {"@AbC www.x.yz 123 MIXED http://q.r 42abc",
                        "nested @one@two http://u.v/@w 99"};
  for (const char* raw : raws) {
    const std::string c = clean(raw);
    CHECK(c.find('@') == std::string::npos);
    CHECK(c.find("http") == std::string::npos);
    CHECK(c.find("www.") == std::string::npos);
    for (char ch : c) {
      CHECK(!(ch >= 'A' && ch <= 'Z'));
      if (ch >= '3' && ch <= '9') FAIL("digit above 2 survived: " << c);
    }
  }
}

TEST_CASE("tokenize follows the token grammar") {
  CHECK(tokenize("i can't stop....!!! plzz") ==
        std::vector<std::string>{"i", "can't", "stop", "plzz"});
  CHECK(tokenize("......").empty());
  CHECK(tokenize("1 you reminded me") == std::vector<std::string>{"1", "you", "reminded", "me"});
  CHECK(tokenize("'ello stop' '''") == std::vector<std::string>{"ello", "stop"});
  CHECK(tokenize("") == std::vector<std::string>{});
}

TEST_CASE("lemmatizer matches the frozen fixture") {
  Lemmatizer lem;
  std::ifstream in(fixture("lemma_fixture.tsv"));
  REQUIRE(in.good());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    const std::string form = line.substr(0, tab);
    const std::string want = line.substr(tab + 1);
    INFO(form);
    CHECK(lem.lemma(form) == want);
    ++rows;
  }
  CHECK(rows >= 200);
}

TEST_CASE("lemmatizer keeps sentinels and contractions") {
  Lemmatizer lem;
  CHECK(lem.lemma("0") == "0");
  CHECK(lem.lemma("1") == "1");
  CHECK(lem.lemma("2") == "2");
  CHECK(lem.lemma("hasn't") == "hasn't");
  CHECK(lem.lemma("can't") == "can't");
  CHECK(lem.lemma("zzkqj") == "zzkqj");  // unknown forms unchanged
}

TEST_CASE("lemma exception file overrides the built-in table") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "twsent_lemma_extra.tsv").string();
  {
    std::ofstream out(path);
    out << "# test entries\nplzz\tplease\n";
  }
  Lemmatizer lem;
  lem.load_exceptions(path);
  CHECK(lem.lemma("plzz") == "please");
}

TEST_CASE("pipeline keeps stop words and order") {
  Lemmatizer lem;
  Tweet t{4, "@joyce_ap ive been to cebu and bohol na.", 0};
  TokenSequence seq = preprocess_pipeline(t, lem);
  REQUIRE(seq.tokens.size() >= 5);
  CHECK(seq.tokens[0] == "1");
  CHECK(seq.tokens[1] == "ive");
  CHECK(seq.tokens[2] == "been");
  CHECK(seq.tokens[3] == "to");
  CHECK(seq.tokens[4] == "cebu");
  CHECK(seq.source_id == 4);

  Tweet negs{5, "i hasn't and can't even", 0};
  TokenSequence nseq = preprocess_pipeline(negs, lem);
  CHECK(std::count(nseq.tokens.begin(), nseq.tokens.end(), "hasn't") == 1);
  CHECK(std::count(nseq.tokens.begin(), nseq.tokens.end(), "can't") == 1);
}

TEST_CASE("pipeline of empty text is empty") {
  Lemmatizer lem;
  TokenSequence seq = preprocess_pipeline(Tweet{0, "....", 0}, lem);
  CHECK(seq.tokens.empty());
}

TEST_CASE("pipeline is idempotent on its own joined output") {
  Lemmatizer lem;
  for (const auto& [raw, cleaned] : kCleanCases) {
    TokenSequence first = preprocess_pipeline(Tweet{0, raw, 0}, lem);
    std::string joined;
    for (const std::string& tok : first.tokens) {
      if (!joined.empty()) joined += ' ';
      joined += tok;
    }
    TokenSequence second = preprocess_pipeline(Tweet{0, joined, 0}, lem);
    CHECK(second.tokens == first.tokens);
  }
}

TEST_CASE("token cache round-trips") {
  std::vector<TokenSequence> seqs;
  seqs.push_back(TokenSequence{3, {"1", "hello", "can't"}});
  seqs.push_back(TokenSequence{9, {}});
  const std::string path = (std::filesystem::temp_directory_path() / "twsent_cache.tsv").string();
  write_token_cache(seqs, path);
  auto back = read_token_cache(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].source_id == 3);
  CHECK(back[0].tokens == seqs[0].tokens);
  CHECK(back[1].source_id == 9);
  CHECK(back[1].tokens.empty());
}

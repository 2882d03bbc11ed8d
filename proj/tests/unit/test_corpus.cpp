#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include "twsent/corpus.hpp"

using namespace twsent;

namespace {
std::string fixture(const std::string& name) { return std::string(TWSENT_FIXTURE_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}
}  // namespace

TEST_CASE("load_csv reads the sample rows") {
  LoadResult r = load_csv(fixture("table1.csv"));
  REQUIRE(r.tweets.size() == 8);
  REQUIRE(r.skipped == 0);
  CHECK(r.tweets[2].text ==
        "my cat is happy so she's drooling from 3 places of her mouth. I love felix");
  CHECK(r.tweets[2].label == 1);
  CHECK(r.tweets[1].label == 0);
  // ids follow row order
  for (std::size_t i = 0; i < r.tweets.size(); ++i)
    CHECK(r.tweets[i].id == static_cast<std::int64_t>(i));
}

TEST_CASE("load_csv rejects degenerate inputs") {
  const std::string empty = temp_file("twsent_empty.csv", "Sentiment,SentimentText\n");
  CHECK_THROWS_WITH(load_csv(empty), Catch::Matchers::ContainsSubstring("zero valid rows"));

  const std::string missing = temp_file("twsent_missing.csv", "foo,bar\n1,2\n");
  CHECK_THROWS_WITH(load_csv(missing), Catch::Matchers::ContainsSubstring("missing column"));

  CHECK_THROWS(load_csv("/nonexistent/nowhere.csv"));
}

TEST_CASE("load_csv skips out-of-domain labels and counts them") {
  const std::string path = temp_file("twsent_skip.csv",
                                     "Sentiment,SentimentText\n"
                                     "1,all good here\n"
                                     "2,label out of domain\n"
                                     "0,\n"
                                     "0,fine row\n");
  LoadResult r = load_csv(path);
  REQUIRE(r.tweets.size() == 2);
  CHECK(r.skipped == 2);
}

TEST_CASE("load_csv handles quoted fields with commas and escaped quotes") {
  const std::string path = temp_file("twsent_quotes.csv",
                                     "Sentiment,SentimentText\n"
                                     "1,\"hello, \"\"world\"\"\"\n");
  LoadResult r = load_csv(path);
  REQUIRE(r.tweets.size() == 1);
  CHECK(r.tweets[0].text == "hello, \"world\"");
}

namespace {
std::vector<Tweet> make_tweets(std::size_t n) {
  std::vector<Tweet> v;
  for (std::size_t i = 0; i < n; ++i)
    v.push_back(Tweet{static_cast<std::int64_t>(i), "t" + std::to_string(i),
                      static_cast<int>(i % 2)});
  return v;
}
}  // namespace

TEST_CASE("subsample identity and determinism") {
  auto tweets = make_tweets(100);
  CHECK(subsample(tweets, 1.0, 1).size() == 100);

  auto a = subsample(tweets, 0.5, 77);
  auto b = subsample(tweets, 0.5, 77);
  REQUIRE(a.size() == 50);
  std::set<std::int64_t> ida, idb;
  for (const Tweet& t : a) ida.insert(t.id);
  for (const Tweet& t : b) idb.insert(t.id);
  CHECK(ida == idb);

  auto c = subsample(tweets, 0.5, 78);
  std::set<std::int64_t> idc;
  for (const Tweet& t : c) idc.insert(t.id);
  CHECK(ida != idc);

  CHECK_THROWS(subsample(tweets, 0.0, 1));
  CHECK_THROWS(subsample(tweets, 1.5, 1));
}

TEST_CASE("subsample takes floor(fraction*N)") {
  auto tweets = make_tweets(1000);
  CHECK(subsample(tweets, 0.1, 3).size() == 100);
  CHECK(subsample(tweets, 0.1234, 3).size() == 123);
}

TEST_CASE("split stratifies and partitions") {
  auto tweets = make_tweets(10);  // 5 of each class
  DatasetSplit s = split(tweets, 0.7, 5, true);
  auto count = [](const std::vector<Tweet>& v, int label) {
    return std::count_if(v.begin(), v.end(), [&](const Tweet& t) { return t.label == label; });
  };
  CHECK(s.train.size() + s.test.size() == 10);
  CHECK((count(s.train, 0) == 3 || count(s.train, 0) == 4));
  CHECK((count(s.train, 1) == 3 || count(s.train, 1) == 4));

  // partition: every id in exactly one side
  std::set<std::int64_t> seen;
  for (const Tweet& t : s.train) seen.insert(t.id);
  for (const Tweet& t : s.test) {
    CHECK(seen.count(t.id) == 0);
    seen.insert(t.id);
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("split sizes follow the ratio at scale") {
  auto tweets = make_tweets(157860);
  DatasetSplit s = split(tweets, 0.7, 9, true);
  CHECK(std::llabs(static_cast<long long>(s.train.size()) - 110502) <= 1);
  CHECK(s.train.size() + s.test.size() == 157860);
}

TEST_CASE("split is deterministic and writes identical manifests") {
  auto tweets = make_tweets(200);
  DatasetSplit a = split(tweets, 0.7, 123, true);
  DatasetSplit b = split(tweets, 0.7, 123, true);
  const std::string pa = temp_file("twsent_manifest_a.csv", "");
  const std::string pb = temp_file("twsent_manifest_b.csv", "");
  write_split_manifest(a, pa);
  write_split_manifest(b, pb);
  CHECK(file_fingerprint(pa) == file_fingerprint(pb));
}

TEST_CASE("split refuses a missing class when stratifying") {
  std::vector<Tweet> tweets;
  for (int i = 0; i < 6; ++i) tweets.push_back(Tweet{i, "x", 1});
  CHECK_THROWS(split(tweets, 0.7, 1, true));
  CHECK_NOTHROW(split(tweets, 0.7, 1, false));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "twsent/models/classifier.hpp"
#include "twsent/models/naive_bayes.hpp"

using namespace twsent;

namespace {
std::vector<TokenSequence> seqs_of(std::vector<std::vector<std::string>> sentences) {
  std::vector<TokenSequence> out;
  std::int64_t id = 0;
  for (auto& s : sentences) out.push_back(TokenSequence{id++, std::move(s)});
  return out;
}

// Independent brute-force oracle for multinomial NB with the reserved
// unseen slot: P(w|c) = (count(w,c)+1)/(tokens(c)+V+1).
struct NbOracle {
  std::map<std::string, std::array<long, 2>> counts;
  long docs[2] = {0, 0};
  long tokens[2] = {0, 0};

  NbOracle(const std::vector<TokenSequence>& seqs, const std::vector<int>& labels) {
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      ++docs[labels[i]];
      for (const auto& t : seqs[i].tokens) {
        auto& c = counts[t];
        ++c[static_cast<std::size_t>(labels[i])];
        ++tokens[labels[i]];
      }
    }
  }

  std::array<double, 2> log_posterior(const TokenSequence& seq) const {
    const long v = static_cast<long>(counts.size());
    std::array<double, 2> lp{};
    for (int c = 0; c < 2; ++c) {
      lp[static_cast<std::size_t>(c)] =
          std::log(static_cast<double>(docs[c]) / static_cast<double>(docs[0] + docs[1]));
      for (const auto& t : seq.tokens) {
        long cnt = 0;
        if (auto it = counts.find(t); it != counts.end())
          cnt = it->second[static_cast<std::size_t>(c)];
        lp[static_cast<std::size_t>(c)] +=
            std::log(static_cast<double>(cnt + 1) / static_cast<double>(tokens[c] + v + 1));
      }
    }
    return lp;
  }

  int predict(const TokenSequence& seq) const {
    auto lp = log_posterior(seq);
    return lp[1] >= lp[0] ? 1 : 0;
  }
};

// deterministic 50-tweet toy corpus over a tiny vocabulary
void toy_corpus(std::vector<TokenSequence>& seqs, std::vector<int>& labels) {
  const std::vector<std::string> pos = {"good", "great", "fun"};
  const std::vector<std::string> neg = {"bad", "awful", "sad"};
  const std::vector<std::string> fill = {"the", "day", "was", "so", "very"};
  Rng rng(404);
  std::vector<std::vector<std::string>> sentences;
  for (int i = 0; i < 50; ++i) {
    const int label = static_cast<int>(rng.next_index(2));
    std::vector<std::string> s;
    const int len = 2 + static_cast<int>(rng.next_index(6));
    for (int k = 0; k < len; ++k) s.push_back(fill[rng.next_index(fill.size())]);
    const auto& pool = label ? pos : neg;
    const int nsent = 1 + static_cast<int>(rng.next_index(2));
    for (int k = 0; k < nsent; ++k)
      s.insert(s.begin() + static_cast<std::ptrdiff_t>(rng.next_index(s.size() + 1)),
               pool[rng.next_index(pool.size())]);
    sentences.push_back(std::move(s));
    labels.push_back(label);
  }
  seqs = seqs_of(std::move(sentences));
}
}  // namespace

TEST_CASE("naive bayes hand-computed smoothing example") {
  // train {[good]:1, [bad]:0}: V = 2 known words,
  // P(good|pos) = (1+1)/(1+2+1) = 0.5
  auto seqs = seqs_of({{"good"}, {"bad"}});
  NaiveBayesModel m = NaiveBayesModel::train(seqs, {1, 0});
  CHECK(m.vocab_size() == 2);
  CHECK_THAT(std::exp(m.token_log_likelihood("good", 1)),
             Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(std::exp(m.token_log_likelihood("bad", 1)),
             Catch::Matchers::WithinAbs(0.25, 1e-12));   // unseen in class 1
  CHECK_THAT(std::exp(m.token_log_likelihood("new", 1)),
             Catch::Matchers::WithinAbs(0.25, 1e-12));   // reserved unseen slot
  CHECK_THAT(std::exp(m.log_prior(0)), Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(std::exp(m.log_prior(1)), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("naive bayes likelihoods sum to one over vocab plus unseen mass") {
  std::vector<TokenSequence> seqs;
  std::vector<int> labels;
  toy_corpus(seqs, labels);
  NaiveBayesModel m = NaiveBayesModel::train(seqs, labels);
  std::map<std::string, bool> vocab;
  for (const auto& s : seqs)
    for (const auto& t : s.tokens) vocab[t] = true;
  for (int c = 0; c < 2; ++c) {
    double total = std::exp(m.token_log_likelihood("__unseen__", c));
    for (const auto& [tok, unused] : vocab) total += std::exp(m.token_log_likelihood(tok, c));
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("naive bayes agrees with the brute-force oracle everywhere") {
  std::vector<TokenSequence> seqs;
  std::vector<int> labels;
  toy_corpus(seqs, labels);
  NaiveBayesModel m = NaiveBayesModel::train(seqs, labels);
  NbOracle oracle(seqs, labels);

  for (const auto& s : seqs) {
    auto got = m.predict(s);
    auto want = oracle.log_posterior(s);
    CHECK(got.label == oracle.predict(s));
    CHECK_THAT(got.log_posterior[0], Catch::Matchers::WithinAbs(want[0], 1e-10));
    CHECK_THAT(got.log_posterior[1], Catch::Matchers::WithinAbs(want[1], 1e-10));
  }

  SECTION("duplicating the corpus still matches the oracle") {
    std::vector<TokenSequence> twice = seqs;
    std::vector<int> twice_labels = labels;
    twice.insert(twice.end(), seqs.begin(), seqs.end());
    twice_labels.insert(twice_labels.end(), labels.begin(), labels.end());
    NaiveBayesModel m2 = NaiveBayesModel::train(twice, twice_labels);
    NbOracle oracle2(twice, twice_labels);
    for (const auto& s : seqs) {
      CHECK(m2.predict(s).label == oracle2.predict(s));
      CHECK_THAT(m2.predict(s).log_posterior[1],
                 Catch::Matchers::WithinAbs(oracle2.log_posterior(s)[1], 1e-10));
    }
  }
}

TEST_CASE("naive bayes edge predictions") {
  auto seqs = seqs_of({{"good", "fun"}, {"bad"}, {"awful", "bad"}});
  NaiveBayesModel m = NaiveBayesModel::train(seqs, {1, 0, 0});

  SECTION("empty token list falls back to priors") {
    auto p = m.predict(TokenSequence{9, {}});
    CHECK(p.label == 0);  // prior favors the 2-doc negative class
    CHECK_THAT(p.log_posterior[0], Catch::Matchers::WithinAbs(std::log(2.0 / 3.0), 1e-12));
  }
  SECTION("all-unseen tweet with balanced priors ties to label 1") {
    auto balanced = seqs_of({{"good"}, {"bad"}});
    NaiveBayesModel mb = NaiveBayesModel::train(balanced, {1, 0});
    auto p = mb.predict(TokenSequence{9, {"zz", "qq"}});
    CHECK(p.log_posterior[0] == p.log_posterior[1]);
    CHECK(p.label == 1);
  }
  SECTION("single-class corpus is rejected") {
    CHECK_THROWS(NaiveBayesModel::train(seqs_of({{"a"}, {"b"}}), {1, 1}));
  }
}

TEST_CASE("naive bayes persistence reproduces posteriors exactly") {
  std::vector<TokenSequence> seqs;
  std::vector<int> labels;
  toy_corpus(seqs, labels);
  NaiveBayesModel m = NaiveBayesModel::train(seqs, labels);
  const std::string path = (std::filesystem::temp_directory_path() / "twsent_nb.model").string();
  m.save(path);
  NaiveBayesModel back = NaiveBayesModel::load(path);
  for (const auto& s : seqs) {
    CHECK(back.predict(s).label == m.predict(s).label);
    CHECK(back.predict(s).log_posterior[1] == m.predict(s).log_posterior[1]);
  }
}

TEST_CASE("pad prepends zeros and masks content") {
  const int D = 2;
  SECTION("full-length input is unchanged") {
    EmbeddedSequence seq;
    seq.dim = D;
    for (int i = 0; i < 93 * D; ++i) seq.values.push_back(static_cast<float>(i));
    PaddedRow row = pad(seq, 93);
    CHECK_FALSE(row.truncated);
    CHECK(row.values == seq.values);
    CHECK(std::count(row.mask.begin(), row.mask.end(), true) == 93);
  }
  SECTION("empty input gives all zeros, all false") {
    EmbeddedSequence seq;
    seq.dim = D;
    PaddedRow row = pad(seq, 93);
    CHECK(std::count(row.mask.begin(), row.mask.end(), true) == 0);
    CHECK(std::count(row.values.begin(), row.values.end(), 0.0f) == 93 * D);
  }
  SECTION("length-2 input lands at positions 91 and 92") {
    EmbeddedSequence seq;
    seq.dim = D;
    seq.values = {1, 2, 3, 4};
    PaddedRow row = pad(seq, 93);
    CHECK(row.mask[90] == false);
    CHECK(row.mask[91] == true);
    CHECK(row.mask[92] == true);
    CHECK(row.values[91 * D] == 1.0f);
    CHECK(row.values[91 * D + 1] == 2.0f);
    CHECK(row.values[92 * D] == 3.0f);
    CHECK(row.values[92 * D + 1] == 4.0f);
    for (int i = 0; i < 91 * D; ++i) CHECK(row.values[static_cast<std::size_t>(i)] == 0.0f);
  }
  SECTION("over-length input keeps the last max_len tokens and is flagged") {
    EmbeddedSequence seq;
    seq.dim = 1;
    for (int i = 0; i < 100; ++i) seq.values.push_back(static_cast<float>(i));
    PaddedRow row = pad(seq, 93);
    CHECK(row.truncated);
    CHECK(row.values.front() == 7.0f);
    CHECK(row.values.back() == 99.0f);
  }
}

TEST_CASE("classifier parameter counts follow the closed form") {
  ClassifierConfig cfg;
  cfg.arch = Arch::lstm;
  cfg.hidden_layers = 4;
  cfg.hidden_size = 100;
  cfg.input_dim = 100;
  SequenceClassifier<float> model(cfg);
  nn::ParamList<float> params = model.params();
  // 4 layers of 4*(100*100 + 100*100 + 100), head (100 + 1)
  CHECK(params.total_size() == 4u * (4u * (100u * 100u + 100u * 100u + 100u)) + 101u);

  ClassifierConfig one = cfg;
  one.hidden_layers = 1;
  SequenceClassifier<float> m1(one);
  // identical head shape, three fewer LSTM layers
  CHECK(m1.params().total_size() == params.total_size() - 3u * (4u * (100u * 100u + 100u * 100u + 100u)));
}

TEST_CASE("invalid classifier configs are rejected") {
  ClassifierConfig cfg;
  cfg.hidden_layers = 0;
  CHECK_THROWS(SequenceClassifier<float>(cfg));
  ClassifierConfig conv;
  conv.arch = Arch::cnn;
  conv.hidden_layers = 50;  // conv stack would exhaust the padded length
  conv.kernel_width = 3;
  conv.max_len = 93;
  CHECK_THROWS(SequenceClassifier<float>(conv));
}

TEST_CASE("untrained zero head predicts 0.5") {
  ClassifierConfig cfg;
  cfg.arch = Arch::mlp;
  cfg.input_dim = 8;
  cfg.hidden_size = 8;
  SequenceClassifier<float> model(cfg);
  nn::ParamList<float> params = model.params();
  for (auto& t : params.tensors)
    if (t.name.rfind("head", 0) == 0)
      for (std::size_t i = 0; i < t.size; ++i) t.data[i] = 0.0f;

  SequenceDataset data;
  data.dim = 8;
  Rng rng(5);
  for (int i = 0; i < 4; ++i) {
    std::vector<float> f(8);
    for (float& v : f) v = rng.next_float();
    data.features.push_back(std::move(f));
    data.labels.push_back(i % 2);
  }
  for (double p : predict_probabilities(model, data))
    CHECK_THAT(p, Catch::Matchers::WithinAbs(0.5, 1e-7));
}

namespace {
SequenceDataset random_sequences(Rng& rng, int n, int dim, int min_len, int max_len) {
  SequenceDataset data;
  data.dim = dim;
  for (int i = 0; i < n; ++i) {
    EmbeddedSequence seq;
    seq.dim = dim;
    const int len = min_len + static_cast<int>(rng.next_index(
                                  static_cast<std::uint64_t>(max_len - min_len + 1)));
    seq.values.resize(static_cast<std::size_t>(len * dim));
    for (float& v : seq.values) v = rng.next_float() * 2 - 1;
    data.examples.push_back(std::move(seq));
    data.labels.push_back(static_cast<int>(rng.next_index(2)));
  }
  return data;
}
}  // namespace

TEST_CASE("batch prediction equals single prediction") {
  for (Arch arch : {Arch::lstm, Arch::cnn}) {
    ClassifierConfig cfg;
    cfg.arch = arch;
    cfg.hidden_layers = 2;
    cfg.hidden_size = 8;
    cfg.input_dim = 6;
    cfg.max_len = 12;
    cfg.seed = 77;
    SequenceClassifier<float> model(cfg);

    Rng rng(11);
    SequenceDataset data = random_sequences(rng, 9, 6, 1, 12);
    std::vector<double> batched = predict_probabilities(model, data, 9);
    std::vector<double> single = predict_probabilities(model, data, 1);
    REQUIRE(batched.size() == single.size());
    for (std::size_t i = 0; i < batched.size(); ++i)
      CHECK_THAT(batched[i], Catch::Matchers::WithinAbs(single[i], 1e-6));
  }
}

TEST_CASE("prediction is deterministic (dropout off at eval)") {
  ClassifierConfig cfg;
  cfg.arch = Arch::lstm;
  cfg.hidden_layers = 1;
  cfg.hidden_size = 8;
  cfg.input_dim = 4;
  cfg.max_len = 10;
  SequenceClassifier<float> model(cfg);
  Rng rng(13);
  SequenceDataset data = random_sequences(rng, 5, 4, 2, 10);
  CHECK(predict_probabilities(model, data) == predict_probabilities(model, data));
}

TEST_CASE("padded steps are seen by the lstm (mask intentionally unused)") {
  ClassifierConfig cfg;
  cfg.arch = Arch::lstm;
  cfg.hidden_layers = 1;
  cfg.hidden_size = 8;
  cfg.input_dim = 4;
  cfg.max_len = 16;
  cfg.seed = 3;
  SequenceClassifier<float> model(cfg);

  // At initialization the candidate-gate bias is zero and zero-vector
  // padding steps happen to leave the state at exactly zero; any nonzero
  // candidate bias (as after training) makes the padding visible.
  nn::ParamList<float> params = model.params();
  for (auto& t : params.tensors)
    if (t.name == "lstm0.b")
      for (std::size_t i = 3 * t.size / 4; i < t.size; ++i) t.data[i] = 0.3f;

  Rng rng(21);
  nn::Mat<float> content(4, 4);  // T=4, B=1
  for (Eigen::Index i = 0; i < content.size(); ++i) content.data()[i] = rng.next_float() - 0.5f;

  Rng unused(0);
  nn::Mat<float> direct = model.forward(content, 4, false, unused);

  nn::Mat<float> padded = nn::Mat<float>::Zero(16, 4);
  padded.bottomRows(4) = content;
  nn::Mat<float> through_padding = model.forward(padded, 16, false, unused);

  CHECK(std::abs(direct(0, 0) - through_padding(0, 0)) > 1e-6);
}

TEST_CASE("mlp fits a linearly separable toy problem") {
  ClassifierConfig cfg;
  cfg.arch = Arch::mlp;
  cfg.input_dim = 4;
  cfg.hidden_size = 16;
  cfg.dropout = 0.0;
  cfg.seed = 9;
  SequenceClassifier<float> model(cfg);

  SequenceDataset data;
  data.dim = 4;
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    std::vector<float> f(4);
    for (float& v : f) v = rng.next_float() * 2 - 1;
    const float score = f[0] + 0.5f * f[1] - 0.8f * f[2] + 0.1f * f[3];
    data.labels.push_back(score > 0 ? 1 : 0);
    data.features.push_back(std::move(f));
  }
  FitSettings fit;
  fit.epochs = 50;
  fit.batch_size = 16;
  fit.seed = 30;
  train_classifier(model, data, fit);

  std::vector<int> pred = predict_labels(model, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == data.labels[i]) ++correct;
  CHECK(correct == pred.size());
}

TEST_CASE("training is deterministic and zero epochs keep the init") {
  ClassifierConfig cfg;
  cfg.arch = Arch::cnn;
  cfg.hidden_layers = 1;
  cfg.hidden_size = 6;
  cfg.input_dim = 5;
  cfg.max_len = 10;
  cfg.kernel_width = 3;
  cfg.seed = 4;

  Rng rng(23);
  SequenceDataset data = random_sequences(rng, 30, 5, 3, 10);
  FitSettings fit;
  fit.epochs = 3;
  fit.seed = 51;

  SequenceClassifier<float> a(cfg);
  SequenceClassifier<float> b(cfg);
  FitLog la = train_classifier(a, data, fit);
  FitLog lb = train_classifier(b, data, fit);
  CHECK(la.epoch_loss == lb.epoch_loss);
  CHECK(la.epoch_accuracy == lb.epoch_accuracy);

  SequenceClassifier<float> init(cfg);
  SequenceClassifier<float> zero(cfg);
  FitSettings none;
  none.epochs = 0;
  FitLog lz = train_classifier(zero, data, none);
  CHECK(lz.epoch_loss.empty());
  CHECK(predict_probabilities(zero, data) == predict_probabilities(init, data));
}

TEST_CASE("empty training data is rejected") {
  ClassifierConfig cfg;
  cfg.arch = Arch::mlp;
  cfg.input_dim = 2;
  SequenceClassifier<float> model(cfg);
  SequenceDataset data;
  data.dim = 2;
  FitSettings fit;
  CHECK_THROWS(train_classifier(model, data, fit));
}

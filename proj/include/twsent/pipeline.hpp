#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <unordered_map>

#include "twsent/config.hpp"
#include "twsent/embedding_trainer.hpp"
#include "twsent/eval.hpp"
#include "twsent/models/classifier.hpp"
#include "twsent/models/naive_bayes.hpp"
#include "twsent/nn/checkpoint.hpp"
#include "twsent/pca.hpp"
#include "twsent/pipeline_paths.hpp"
#include "twsent/preprocess.hpp"
#include "twsent/sentence_vectors.hpp"

namespace twsent {

// ---- preprocess ------------------------------------------------------------

struct PreprocessResult {
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::size_t skipped_rows = 0;
  std::string manifest_hash;
};

inline PreprocessResult run_preprocess(const RunConfig& cfg) {
  if (cfg.dataset.empty()) throw ConfigError("preprocess: no dataset configured");
  ArtifactPaths paths(cfg.out_dir);
  paths.ensure_root();

  LoadResult loaded = load_csv(cfg.dataset, cfg.schema());
  std::vector<Tweet> sample = subsample(loaded.tweets, cfg.fraction, cfg.seed);
  DatasetSplit split_result = split(sample, cfg.ratio, cfg.seed, cfg.stratify, cfg.fraction);

  Lemmatizer lemmatizer;
  std::vector<TokenSequence> seqs;
  seqs.reserve(sample.size());
  std::size_t total_tokens = 0, max_len = 0;
  std::unordered_map<std::string, bool> distinct;
  auto process = [&](const std::vector<Tweet>& tweets) {
    for (const Tweet& t : tweets) {
      TokenSequence s = preprocess_pipeline(t, lemmatizer);
      total_tokens += s.tokens.size();
      max_len = std::max(max_len, s.tokens.size());
      for (const std::string& tok : s.tokens) distinct[tok] = true;
      seqs.push_back(std::move(s));
    }
  };
  process(split_result.train);
  process(split_result.test);

  write_token_cache(seqs, paths.tokens());
  write_split_manifest(split_result, paths.manifest());
  write_split_summary(split_result, paths.summary());
  {
    std::ofstream out(paths.labels(), std::ios::binary);
    for (const Tweet& t : split_result.train) out << t.id << '\t' << t.label << '\n';
    for (const Tweet& t : split_result.test) out << t.id << '\t' << t.label << '\n';
  }
  {
    nlohmann::json stats;
    stats["total_tokens"] = total_tokens;
    stats["vocab_size"] = distinct.size();
    stats["max_length"] = max_len;
    stats["skipped_rows"] = loaded.skipped;
    std::ofstream out(paths.stats(), std::ios::binary);
    out << stats.dump(2) << "\n";
  }
  cfg.save(paths.config());

  PreprocessResult r;
  r.train_count = split_result.train.size();
  r.test_count = split_result.test.size();
  r.skipped_rows = loaded.skipped;
  r.manifest_hash = file_fingerprint(paths.manifest());
  return r;
}

// ---- prepared data (cache + manifest + labels) ------------------------------

struct PreparedData {
  std::vector<TokenSequence> train;
  std::vector<TokenSequence> test;
  std::vector<int> train_labels;
  std::vector<int> test_labels;
  std::string manifest_hash;
};

inline PreparedData load_prepared(const RunConfig& cfg) {
  ArtifactPaths paths(cfg.out_dir);
  namespace fs = std::filesystem;
  if (!fs::exists(paths.tokens()) || !fs::exists(paths.manifest()) ||
      !fs::exists(paths.labels()))
    throw MissingArtifact("pipeline: preprocess artifacts missing under " + cfg.out_dir +
                          " (run preprocess first)");

  std::unordered_map<std::int64_t, char> partition;  // 'r' train, 'e' test
  {
    std::ifstream in(paths.manifest(), std::ios::binary);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::size_t comma = line.find(',');
      partition[std::stoll(line.substr(0, comma))] =
          line.compare(comma + 1, 5, "train") == 0 ? 'r' : 'e';
    }
  }
  std::unordered_map<std::int64_t, int> labels;
  {
    std::ifstream in(paths.labels(), std::ios::binary);
    std::int64_t id = 0;
    int label = 0;
    while (in >> id >> label) labels[id] = label;
  }

  PreparedData out;
  for (TokenSequence& seq : read_token_cache(paths.tokens())) {
    const auto part = partition.find(seq.source_id);
    const auto lab = labels.find(seq.source_id);
    if (part == partition.end() || lab == labels.end())
      throw std::runtime_error("pipeline: cache row " + std::to_string(seq.source_id) +
                               " missing from manifest");
    if (part->second == 'r') {
      out.train_labels.push_back(lab->second);
      out.train.push_back(std::move(seq));
    } else {
      out.test_labels.push_back(lab->second);
      out.test.push_back(std::move(seq));
    }
  }
  out.manifest_hash = file_fingerprint(paths.manifest());
  return out;
}

// ---- embeddings --------------------------------------------------------------

inline void write_train_log(const std::vector<double>& losses, const std::string& path) {
  nlohmann::json j;
  j["epoch_loss"] = losses;
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

// kind: cbow | skipgram | fasttext | sentence. Word kinds train on the
// train-split sequences only; the test split stays unseen.
inline void run_train_embeddings(const RunConfig& cfg, const std::string& kind) {
  ArtifactPaths paths(cfg.out_dir);
  PreparedData data = load_prepared(cfg);
  TrainConfig tc = cfg.embedding_config();
  const Vocabulary vocab = Vocabulary::build(data.train, tc.min_count);

  if (kind == "sentence") {
    SentenceVectors sv = train_sentence_vectors(data.train, vocab, tc);
    save_doc_vectors(sv, paths.doc_vectors(tc.dim));
    save_model_binary(sv.word_model, paths.sentence_word_model(tc.dim));
    write_train_log(sv.epoch_losses, paths.embedding_log("sentence", tc.dim));
    if (sv.epoch_losses.empty())
      std::cerr << "train-embeddings: epochs=0, initialized vectors persisted\n";
    return;
  }

  EmbeddingModel model;
  if (kind == "cbow")
    model = train_cbow(data.train, vocab, tc);
  else if (kind == "skipgram")
    model = train_skipgram(data.train, vocab, tc);
  else if (kind == "fasttext")
    model = train_fasttext(data.train, vocab, tc);
  else
    throw ConfigError("train-embeddings: unknown kind " + kind);

  save_model_binary(model, paths.embedding_model(kind, tc.dim));
  save_vec_text(model, paths.embedding_vec(kind, tc.dim));
  write_train_log(model.epoch_losses, paths.embedding_log(kind, tc.dim));
  if (model.epoch_losses.empty())
    std::cerr << "train-embeddings: epochs=0, initialized model persisted\n";
}

// ---- feature assembly ---------------------------------------------------------

// Embeds a token sequence row-per-token; out-of-vocabulary tokens become
// zero rows for cbow/skipgram while fasttext composes them from n-grams.
inline SequenceDataset embed_sequences(const EmbeddingModel& model,
                                       const std::vector<TokenSequence>& seqs,
                                       const std::vector<int>& labels) {
  SequenceDataset out;
  out.dim = model.dim;
  out.labels = labels;
  out.examples.reserve(seqs.size());
  const int dim = model.dim;
  for (const TokenSequence& seq : seqs) {
    EmbeddedSequence es;
    es.dim = dim;
    es.values.assign(seq.tokens.size() * static_cast<std::size_t>(dim), 0.0f);
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      const std::string& tok = seq.tokens[i];
      if (model.kind != EmbeddingKind::fasttext && !model.vocab.contains(tok)) continue;
      model.word_vector_into(tok, es.values.data() + i * static_cast<std::size_t>(dim));
    }
    out.examples.push_back(std::move(es));
  }
  return out;
}

// ---- classifier training -------------------------------------------------------

// nb | lstm | cnn | mlp together with the layer count make the column names
// the tables use.
inline std::string model_name(const RunConfig& cfg) {
  if (cfg.classifier == "nb") return "nb";
  if (cfg.classifier == "mlp") return "mlp3_sentence_" + std::to_string(cfg.embedding.dim);
  return cfg.classifier + std::to_string(cfg.hidden_layers) + "_" + cfg.embedding_kind + "_" +
         std::to_string(cfg.embedding.dim);
}

inline ClassifierConfig classifier_config(const RunConfig& cfg) {
  ClassifierConfig cc;
  cc.arch = arch_from_name(cfg.classifier);
  cc.hidden_layers = cfg.hidden_layers;
  cc.hidden_size = cfg.hidden_size;
  cc.input_dim = cfg.embedding.dim;
  cc.dropout = cfg.dropout;
  cc.max_len = cfg.max_len;
  cc.kernel_width = cfg.kernel_width;
  cc.seed = cfg.seed;
  return cc;
}

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw MissingArtifact("pipeline: missing prerequisite: " + what);
}

inline SequenceDataset sentence_features(const RunConfig& cfg, const PreparedData& data,
                                         bool test_split) {
  ArtifactPaths paths(cfg.out_dir);
  const int dim = cfg.embedding.dim;
  require(std::filesystem::exists(paths.doc_vectors(dim)), paths.doc_vectors(dim));
  require(std::filesystem::exists(paths.sentence_word_model(dim)), paths.sentence_word_model(dim));

  SentenceVectors sv;
  sv.dim = dim;
  sv.word_model = load_model_binary(paths.sentence_word_model(dim));
  {
    std::ifstream in(paths.doc_vectors(dim));
    std::size_t n = 0;
    int d = 0;
    in >> n >> d;
    if (d != dim) throw std::runtime_error("pipeline: doc-vector dimension mismatch");
    sv.ids.resize(n);
    sv.doc_vectors.resize(n * static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
      in >> sv.ids[i];
      for (int k = 0; k < dim; ++k) in >> sv.doc_vectors[i * static_cast<std::size_t>(dim) +
                                                         static_cast<std::size_t>(k)];
    }
    if (!in) throw std::runtime_error("pipeline: truncated doc-vector file");
    sv.rebuild_index();
  }

  const std::vector<TokenSequence>& seqs = test_split ? data.test : data.train;
  SequenceDataset out;
  out.dim = dim;
  out.labels = test_split ? data.test_labels : data.train_labels;
  out.features.reserve(seqs.size());
  TrainConfig tc = cfg.embedding_config();
  const NegativeTable table(sv.word_model.vocab);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const std::ptrdiff_t row = sv.row_of(seqs[i].source_id);
    if (!test_split && row >= 0) {
      const float* r = sv.doc_row(static_cast<std::size_t>(row));
      out.features.emplace_back(r, r + dim);
    } else {
      // held-out sentence: fit a fresh doc vector against frozen matrices
      out.features.push_back(infer_sentence_vector(
          sv, seqs[i].tokens, table, tc, cfg.infer_epochs,
          derive_seed(cfg.seed, 0x1FE9000 + static_cast<std::uint64_t>(i))));
    }
  }
  return out;
}

inline SequenceDataset word_features(const RunConfig& cfg, const PreparedData& data,
                                     bool test_split) {
  ArtifactPaths paths(cfg.out_dir);
  const std::string model_path = paths.embedding_model(cfg.embedding_kind, cfg.embedding.dim);
  require(std::filesystem::exists(model_path), model_path);
  const EmbeddingModel model = load_model_binary(model_path);
  return embed_sequences(model, test_split ? data.test : data.train,
                         test_split ? data.test_labels : data.train_labels);
}

}  // namespace detail

struct TrainedClassifier {
  std::string name;
  FitLog log;
};

inline TrainedClassifier run_train_classifier(const RunConfig& cfg) {
  ArtifactPaths paths(cfg.out_dir);
  paths.ensure_root();
  PreparedData data = load_prepared(cfg);
  const std::string name = model_name(cfg);
  TrainedClassifier result;
  result.name = name;

  if (cfg.classifier == "nb") {
    NaiveBayesModel nb = NaiveBayesModel::train(data.train, data.train_labels);
    nb.save(paths.nb_model());
  } else {
    SequenceDataset train_data = cfg.classifier == "mlp"
                                     ? detail::sentence_features(cfg, data, false)
                                     : detail::word_features(cfg, data, false);
    SequenceClassifier<float> model(classifier_config(cfg));
    FitSettings fit;
    fit.epochs = cfg.classifier_epochs;
    fit.batch_size = cfg.batch_size;
    fit.lr = cfg.classifier_lr;
    fit.seed = cfg.seed;
    result.log = train_classifier(model, train_data, fit);

    nn::ParamList<float> params = model.params();
    nlohmann::json sidecar;
    sidecar["architecture"] = nlohmann::json::parse(classifier_config(cfg).descriptor());
    sidecar["embedding_kind"] = cfg.classifier == "mlp" ? "sentence" : cfg.embedding_kind;
    sidecar["embedding_dim"] = cfg.embedding.dim;
    sidecar["seed"] = cfg.seed;
    sidecar["epochs"] = cfg.classifier_epochs;
    sidecar["manifest_hash"] = data.manifest_hash;
    sidecar["config_fingerprint"] = cfg.fingerprint();
    sidecar["fit_log"] = {{"epoch_loss", result.log.epoch_loss},
                          {"epoch_accuracy", result.log.epoch_accuracy}};
    nn::save_checkpoint(params, classifier_config(cfg).descriptor(), paths.checkpoint(name));
    std::ofstream out(paths.sidecar(name), std::ios::binary);
    out << sidecar.dump(2) << "\n";
  }
  cfg.save(paths.config());
  return result;
}

inline EvalReport run_evaluate(const RunConfig& cfg) {
  ArtifactPaths paths(cfg.out_dir);
  PreparedData data = load_prepared(cfg);
  const std::string name = model_name(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  EvalReport report;
  report.model_name = name;
  report.epochs = cfg.classifier == "nb" ? 0 : cfg.classifier_epochs;
  report.config_fingerprint = cfg.fingerprint();
  report.manifest_hash = data.manifest_hash;

  if (cfg.classifier == "nb") {
    detail::require(std::filesystem::exists(paths.nb_model()), paths.nb_model());
    NaiveBayesModel nb = NaiveBayesModel::load(paths.nb_model());
    auto evaluate = [&](const std::vector<TokenSequence>& seqs, const std::vector<int>& truth) {
      std::vector<int> pred;
      pred.reserve(seqs.size());
      for (const TokenSequence& s : seqs) pred.push_back(nb.predict(s).label);
      return accuracy(pred, truth);
    };
    report.train_accuracy = evaluate(data.train, data.train_labels);
    report.test_accuracy = evaluate(data.test, data.test_labels);
  } else {
    detail::require(std::filesystem::exists(paths.checkpoint(name)), paths.checkpoint(name));
    const ClassifierConfig cc =
        ClassifierConfig::from_descriptor(nn::read_checkpoint_descriptor(paths.checkpoint(name)));
    SequenceClassifier<float> model(cc);
    nn::ParamList<float> params = model.params();
    nn::load_checkpoint(params, paths.checkpoint(name));

    SequenceDataset train_data = cfg.classifier == "mlp"
                                     ? detail::sentence_features(cfg, data, false)
                                     : detail::word_features(cfg, data, false);
    SequenceDataset test_data = cfg.classifier == "mlp"
                                    ? detail::sentence_features(cfg, data, true)
                                    : detail::word_features(cfg, data, true);
    report.train_accuracy = accuracy(predict_labels(model, train_data), data.train_labels);
    report.test_accuracy = accuracy(predict_labels(model, test_data), data.test_labels);
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(report, paths.report(name));
  return report;
}

// ---- queries and projections ---------------------------------------------------

inline std::vector<std::pair<std::string, double>> run_query(const std::string& model_path,
                                                             const std::string& word,
                                                             std::size_t k) {
  const EmbeddingModel model = load_model_binary(model_path);
  return most_similar(model, word, k);
}

// PCA is fitted on the union of the query words and their top-n neighbors.
inline void run_project(const std::string& model_path, const std::vector<std::string>& words,
                        const std::string& csv_path, const std::string& svg_path,
                        std::size_t neighbors = 10) {
  const EmbeddingModel model = load_model_binary(model_path);
  std::vector<std::string> selected;
  for (const std::string& w : words) {
    if (std::find(selected.begin(), selected.end(), w) == selected.end()) selected.push_back(w);
    for (const auto& [nw, sim] : most_similar(model, w, neighbors))
      if (std::find(selected.begin(), selected.end(), nw) == selected.end())
        selected.push_back(nw);
  }
  std::vector<std::vector<float>> vectors;
  vectors.reserve(selected.size());
  for (const std::string& w : selected) vectors.push_back(model.word_vector(w));
  const PcaProjection proj = pca_project(vectors);
  write_projection_csv(selected, proj, csv_path);
  write_scatter_svg(selected, proj, svg_path);
}

// ---- table reproduction -----------------------------------------------------------

// Reported epoch budgets per table column; early stopping stays off so runs
// are comparable.
inline ComparisonTable run_reproduce_table(const RunConfig& base, int table) {
  ArtifactPaths paths(base.out_dir);
  paths.ensure_root();

  auto column = [&](RunConfig cfg, const std::string& display) {
    ArtifactPaths p(cfg.out_dir);
    const std::string name = model_name(cfg);
    if (cfg.classifier != "nb") {
      const std::string kind = cfg.classifier == "mlp" ? "sentence" : cfg.embedding_kind;
      const bool have_embeddings =
          cfg.classifier == "mlp"
              ? std::filesystem::exists(p.doc_vectors(cfg.embedding.dim))
              : std::filesystem::exists(p.embedding_model(kind, cfg.embedding.dim));
      if (!have_embeddings) run_train_embeddings(cfg, kind);
    }
    if (!std::filesystem::exists(cfg.classifier == "nb" ? p.nb_model() : p.checkpoint(name)))
      run_train_classifier(cfg);
    EvalReport r = run_evaluate(cfg);
    r.model_name = display;
    return r;
  };

  std::vector<EvalReport> reports;
  std::string caption, axis;
  switch (table) {
    case 3: {
      caption = "LSTM-1 vs LSTM-4 vs CNN-1 vs CNN-4, skipgram vectors";
      axis = "models";
      struct Col {
        const char* arch;
        int layers;
        int epochs;
        const char* display;
      };
      for (const Col& c : {Col{"lstm", 1, 9, "LSTM-1"}, Col{"lstm", 4, 9, "LSTM-4"},
                           Col{"cnn", 1, 7, "CNN-1"}, Col{"cnn", 4, 10, "CNN-4"}}) {
        RunConfig cfg = base;
        cfg.classifier = c.arch;
        cfg.hidden_layers = c.layers;
        cfg.classifier_epochs = c.epochs;
        cfg.embedding_kind = "skipgram";
        reports.push_back(column(cfg, c.display));
      }
      break;
    }
    case 4: {
      caption = "Skipgram vs CBOW vs FastText on LSTM-4";
      axis = "embedding kinds";
      struct Col {
        const char* kind;
        int epochs;
        const char* display;
      };
      for (const Col& c : {Col{"skipgram", 9, "Word2Vec Skipgram"}, Col{"cbow", 5, "Word2Vec CBOW"},
                           Col{"fasttext", 15, "FastText"}}) {
        RunConfig cfg = base;
        cfg.classifier = "lstm";
        cfg.hidden_layers = 4;
        cfg.classifier_epochs = c.epochs;
        cfg.embedding_kind = c.kind;
        reports.push_back(column(cfg, c.display));
      }
      break;
    }
    case 5: {
      caption = "LSTM-4, word dimensions 100 vs 200 vs 300";
      axis = "dimensions";
      struct Col {
        int dim;
        int epochs;
      };
      for (const Col& c : {Col{100, 9}, Col{200, 16}, Col{300, 12}}) {
        RunConfig cfg = base;
        cfg.classifier = "lstm";
        cfg.hidden_layers = 4;
        cfg.classifier_epochs = c.epochs;
        cfg.embedding_kind = "skipgram";
        cfg.embedding.dim = c.dim;
        reports.push_back(column(cfg, std::to_string(c.dim) + " dimensions"));
      }
      break;
    }
    case 6: {
      caption = "Feedforward network on sentence vectors, dimensions 100-500";
      axis = "dimensions";
      struct Col {
        int dim;
        int epochs;
      };
      for (const Col& c : {Col{100, 38}, Col{200, 15}, Col{300, 6}, Col{400, 26}, Col{500, 3}}) {
        RunConfig cfg = base;
        cfg.classifier = "mlp";
        cfg.classifier_epochs = c.epochs;
        cfg.embedding.dim = c.dim;
        reports.push_back(column(cfg, std::to_string(c.dim)));
      }
      break;
    }
    default:
      throw ConfigError("reproduce-table: table must be 3, 4, 5 or 6");
  }

  ComparisonTable t = make_table(std::move(reports), caption, axis);
  {
    std::ofstream out(paths.table_csv(table), std::ios::binary);
    out << table_to_csv(t);
  }
  {
    std::ofstream out(paths.table_md(table), std::ios::binary);
    out << table_to_markdown(t);
  }
  return t;
}

}  // namespace twsent

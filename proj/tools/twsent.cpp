// twsent — tweet sentiment pipeline driver.
//
// Sub-commands compose through on-disk artifacts in the run's output
// directory: preprocess writes the token cache and split manifest,
// train-embeddings writes vector models, train-classifier writes
// checkpoints, evaluate writes reports, reproduce-table renders the
// comparison tables.
//
// Exit codes: 0 success, 1 runtime failure, 2 config/input error,
// 3 missing prerequisite artifact.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "twsent/pipeline.hpp"
#include "twsent/version.hpp"

namespace {

twsent::RunConfig load_config(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
  twsent::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = twsent::RunConfig::load(config_path);
  } else if (const char* env = std::getenv("TWSENT_DATA_DIR"); env && cfg.dataset.empty()) {
    cfg.dataset = std::string(env) + "/tweets.csv";
  }
  for (const std::string& kv : overrides) {
    const std::size_t dot = kv.find('.');
    const std::size_t eq = kv.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq)
      throw twsent::ConfigError("--set expects section.key=value, got " + kv);
    cfg.set(kv.substr(0, dot), kv.substr(dot + 1, eq - dot - 1), kv.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tweet sentiment pipeline (distributed word/sentence representations)"};
  app.set_version_flag("--version", twsent::kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "run configuration file (INI)");
  app.add_option("--set", overrides, "override a config value: section.key=value")
      ->take_all();

  auto* cmd_preprocess = app.add_subcommand("preprocess", "clean, tokenize and split the corpus");
  auto* cmd_embed = app.add_subcommand("train-embeddings", "train word or sentence vectors");
  std::string kind = "skipgram";
  int threads = 0;
  cmd_embed->add_option("--kind", kind, "cbow | skipgram | fasttext | sentence");
  cmd_embed->add_option("--threads", threads,
                        "worker threads (lock-free updates; >1 is not deterministic)");

  auto* cmd_query = app.add_subcommand("query", "print the most similar words");
  std::string model_path, word;
  std::size_t topk = 10;
  cmd_query->add_option("--model", model_path, "embedding model file")->required();
  cmd_query->add_option("--word", word, "query word")->required();
  cmd_query->add_option("-k,--top", topk, "neighbours to print");

  auto* cmd_project = app.add_subcommand("project", "2-D PCA projection of words + neighbours");
  std::vector<std::string> words;
  std::string out_csv = "projection.csv", out_svg = "projection.svg";
  std::size_t neighbors = 10;
  cmd_project->add_option("--model", model_path, "embedding model file")->required();
  cmd_project->add_option("--words", words, "query words")->required();
  cmd_project->add_option("--neighbors", neighbors, "neighbours per query word");
  cmd_project->add_option("--csv", out_csv, "output CSV path");
  cmd_project->add_option("--svg", out_svg, "output SVG path");

  auto* cmd_train = app.add_subcommand("train-classifier", "train the configured classifier");
  auto* cmd_eval = app.add_subcommand("evaluate", "evaluate the trained classifier");
  auto* cmd_table = app.add_subcommand("reproduce-table", "rebuild one of the comparison tables");
  int table = 3;
  cmd_table->add_option("--table", table, "table number: 3, 4, 5 or 6")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_preprocess->parsed()) {
      twsent::RunConfig cfg = load_config(config_path, overrides);
      twsent::PreprocessResult r = twsent::run_preprocess(cfg);
      std::cout << "preprocess: train=" << r.train_count << " test=" << r.test_count
                << " skipped=" << r.skipped_rows << " manifest=" << r.manifest_hash << "\n";
    } else if (cmd_embed->parsed()) {
      twsent::RunConfig cfg = load_config(config_path, overrides);
      if (threads > 0) cfg.embedding.threads = threads;
      twsent::run_train_embeddings(cfg, kind);
      std::cout << "train-embeddings: " << kind << " dim=" << cfg.embedding.dim << " done\n";
    } else if (cmd_query->parsed()) {
      for (const auto& [w, sim] : twsent::run_query(model_path, word, topk))
        std::cout << w << "\t" << sim << "\n";
    } else if (cmd_project->parsed()) {
      twsent::run_project(model_path, words, out_csv, out_svg, neighbors);
      std::cout << "project: wrote " << out_csv << " and " << out_svg << "\n";
    } else if (cmd_train->parsed()) {
      twsent::RunConfig cfg = load_config(config_path, overrides);
      twsent::TrainedClassifier t = twsent::run_train_classifier(cfg);
      std::cout << "train-classifier: " << t.name;
      if (!t.log.epoch_loss.empty())
        std::cout << " final_loss=" << t.log.epoch_loss.back()
                  << " final_train_acc=" << t.log.epoch_accuracy.back();
      std::cout << "\n";
    } else if (cmd_eval->parsed()) {
      twsent::RunConfig cfg = load_config(config_path, overrides);
      twsent::EvalReport r = twsent::run_evaluate(cfg);
      std::cout << "evaluate: " << r.model_name << " train=" << r.train_accuracy
                << " test=" << r.test_accuracy << " epochs=" << r.epochs << "\n";
    } else if (cmd_table->parsed()) {
      twsent::RunConfig cfg = load_config(config_path, overrides);
      twsent::ComparisonTable t = twsent::run_reproduce_table(cfg, table);
      std::cout << twsent::table_to_markdown(t);
    }
  } catch (const twsent::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const twsent::MissingArtifact& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

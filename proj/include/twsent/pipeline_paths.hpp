#pragma once

#include <filesystem>
#include <string>

namespace twsent {

// Artifact layout inside a run's output directory. Sub-commands compose
// through these files instead of in-memory handoff, so partial pipelines
// are resumable.
struct ArtifactPaths {
  std::string root;

  explicit ArtifactPaths(std::string dir) : root(std::move(dir)) {}

  void ensure_root() const { std::filesystem::create_directories(root); }

  std::string config() const { return root + "/run_config.ini"; }
  std::string manifest() const { return root + "/split_manifest.csv"; }
  std::string summary() const { return root + "/split_summary.json"; }
  std::string labels() const { return root + "/labels.tsv"; }
  std::string tokens() const { return root + "/tokens.tsv"; }
  std::string stats() const { return root + "/corpus_stats.json"; }

  std::string embedding_model(const std::string& kind, int dim) const {
    return root + "/" + kind + "_" + std::to_string(dim) + ".bin";
  }
  std::string embedding_vec(const std::string& kind, int dim) const {
    return root + "/" + kind + "_" + std::to_string(dim) + ".vec";
  }
  std::string embedding_log(const std::string& kind, int dim) const {
    return root + "/" + kind + "_" + std::to_string(dim) + "_log.json";
  }
  std::string doc_vectors(int dim) const {
    return root + "/sentence_" + std::to_string(dim) + ".docvec";
  }
  std::string sentence_word_model(int dim) const {
    return root + "/sentence_" + std::to_string(dim) + "_words.bin";
  }

  std::string nb_model() const { return root + "/nb.model"; }
  std::string checkpoint(const std::string& name) const { return root + "/" + name + ".ckpt"; }
  std::string sidecar(const std::string& name) const { return root + "/" + name + ".json"; }
  std::string report(const std::string& name) const {
    return root + "/" + name + "_report.json";
  }

  std::string table_csv(int n) const { return root + "/table" + std::to_string(n) + ".csv"; }
  std::string table_md(int n) const { return root + "/table" + std::to_string(n) + ".md"; }
};

}  // namespace twsent

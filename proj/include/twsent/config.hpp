#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "twsent/corpus.hpp"
#include "twsent/errors.hpp"
#include "twsent/embedding.hpp"
#include "twsent/models/classifier.hpp"

namespace twsent {

// Everything a run needs, serialized as a flat INI-style document with one
// section per module. Round-trips losslessly; every command archives the
// config it ran with into its output directory.
struct RunConfig {
  // [corpus]
  std::string dataset;
  std::string text_column = "SentimentText";
  std::string label_column = "Sentiment";
  double fraction = 1.0;
  double ratio = 0.7;
  bool stratify = true;
  std::uint64_t seed = 42;

  // [embedding]
  std::string embedding_kind = "skipgram";  // cbow | skipgram | fasttext | sentence
  TrainConfig embedding;

  // [classifier]
  std::string classifier = "lstm";  // nb | lstm | cnn | mlp
  int hidden_layers = 4;
  int hidden_size = 100;
  double dropout = 0.2;
  int max_len = 93;
  int kernel_width = 3;
  int classifier_epochs = 9;
  int batch_size = 32;
  double classifier_lr = 1e-3;
  int infer_epochs = 50;  // doc-vector fitting for held-out sentences

  // [output]
  std::string out_dir = "out";

  std::string serialize() const {
    std::ostringstream os;
    os.precision(17);
    os << "[corpus]\n";
    os << "dataset = " << dataset << "\n";
    os << "text_column = " << text_column << "\n";
    os << "label_column = " << label_column << "\n";
    os << "fraction = " << fraction << "\n";
    os << "ratio = " << ratio << "\n";
    os << "stratify = " << (stratify ? "true" : "false") << "\n";
    os << "seed = " << seed << "\n";
    os << "\n[embedding]\n";
    os << "kind = " << embedding_kind << "\n";
    os << "dim = " << embedding.dim << "\n";
    os << "window = " << embedding.window << "\n";
    os << "negatives = " << embedding.negatives << "\n";
    os << "epochs = " << embedding.epochs << "\n";
    os << "initial_lr = " << embedding.initial_lr << "\n";
    os << "lr_min = " << embedding.lr_min << "\n";
    os << "min_count = " << embedding.min_count << "\n";
    os << "subsample = " << embedding.subsample_threshold << "\n";
    os << "minn = " << embedding.minn << "\n";
    os << "maxn = " << embedding.maxn << "\n";
    os << "buckets = " << embedding.buckets << "\n";
    os << "threads = " << embedding.threads << "\n";
    os << "\n[classifier]\n";
    os << "model = " << classifier << "\n";
    os << "hidden_layers = " << hidden_layers << "\n";
    os << "hidden_size = " << hidden_size << "\n";
    os << "dropout = " << dropout << "\n";
    os << "max_len = " << max_len << "\n";
    os << "kernel_width = " << kernel_width << "\n";
    os << "epochs = " << classifier_epochs << "\n";
    os << "batch_size = " << batch_size << "\n";
    os << "lr = " << classifier_lr << "\n";
    os << "infer_epochs = " << infer_epochs << "\n";
    os << "\n[output]\n";
    os << "dir = " << out_dir << "\n";
    return os.str();
  }

  static RunConfig parse(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t a = line.find_first_not_of(" \t");
      if (a == std::string::npos) continue;
      if (line[a] == '#' || line[a] == ';') continue;
      if (line[a] == '[') {
        std::size_t b = line.find(']', a);
        if (b == std::string::npos)
          throw ConfigError("config: unterminated section at line " + std::to_string(lineno));
        section = line.substr(a + 1, b - a - 1);
        continue;
      }
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
      auto trim = [](std::string s) {
        std::size_t x = s.find_first_not_of(" \t");
        if (x == std::string::npos) return std::string();
        std::size_t y = s.find_last_not_of(" \t");
        return s.substr(x, y - x + 1);
      };
      c.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << serialize();
  }

  std::string fingerprint() const {
    const std::string s = serialize();
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : s) {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }

  void set(const std::string& section, const std::string& key, const std::string& value) {
    auto as_double = [&] { return std::stod(value); };
    auto as_int = [&] { return std::stoi(value); };
    auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    auto as_bool = [&] {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw ConfigError("config: bad boolean " + value);
    };
    try {
      if (section == "corpus") {
        if (key == "dataset") dataset = value;
        else if (key == "text_column") text_column = value;
        else if (key == "label_column") label_column = value;
        else if (key == "fraction") fraction = as_double();
        else if (key == "ratio") ratio = as_double();
        else if (key == "stratify") stratify = as_bool();
        else if (key == "seed") seed = as_u64();
        else throw ConfigError("config: unknown key corpus." + key);
      } else if (section == "embedding") {
        if (key == "kind") embedding_kind = value;
        else if (key == "dim") embedding.dim = as_int();
        else if (key == "window") embedding.window = as_int();
        else if (key == "negatives") embedding.negatives = as_int();
        else if (key == "epochs") embedding.epochs = as_int();
        else if (key == "initial_lr") embedding.initial_lr = static_cast<float>(as_double());
        else if (key == "lr_min") embedding.lr_min = static_cast<float>(as_double());
        else if (key == "min_count") embedding.min_count = as_u64();
        else if (key == "subsample") embedding.subsample_threshold = as_double();
        else if (key == "minn") embedding.minn = as_int();
        else if (key == "maxn") embedding.maxn = as_int();
        else if (key == "buckets") embedding.buckets = static_cast<std::size_t>(as_u64());
        else if (key == "threads") embedding.threads = as_int();
        else throw ConfigError("config: unknown key embedding." + key);
      } else if (section == "classifier") {
        if (key == "model") classifier = value;
        else if (key == "hidden_layers") hidden_layers = as_int();
        else if (key == "hidden_size") hidden_size = as_int();
        else if (key == "dropout") dropout = as_double();
        else if (key == "max_len") max_len = as_int();
        else if (key == "kernel_width") kernel_width = as_int();
        else if (key == "epochs") classifier_epochs = as_int();
        else if (key == "batch_size") batch_size = as_int();
        else if (key == "lr") classifier_lr = as_double();
        else if (key == "infer_epochs") infer_epochs = as_int();
        else throw ConfigError("config: unknown key classifier." + key);
      } else if (section == "output") {
        if (key == "dir") out_dir = value;
        else throw ConfigError("config: unknown key output." + key);
      } else {
        throw ConfigError("config: unknown section " + section);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config: bad value for " + section + "." + key + ": " + value);
    }
  }

  CsvSchema schema() const { return CsvSchema{text_column, label_column}; }

  // embedding.seed follows the run seed unless the caller set it apart
  TrainConfig embedding_config() const {
    TrainConfig t = embedding;
    t.seed = seed;
    return t;
  }
};

}  // namespace twsent

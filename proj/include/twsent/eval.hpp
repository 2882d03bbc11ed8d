#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace twsent {

inline double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth) {
  if (predictions.empty()) throw std::invalid_argument("eval: empty input");
  if (predictions.size() != truth.size())
    throw std::invalid_argument("eval: prediction/truth length mismatch");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == truth[i]) ++correct;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(predictions.size());
}

struct Confusion {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::uint64_t total() const { return tp + fp + fn + tn; }
  double accuracy() const {
    return 100.0 * static_cast<double>(tp + tn) / static_cast<double>(total());
  }
};

inline Confusion confusion(const std::vector<int>& predictions, const std::vector<int>& truth) {
  if (predictions.empty()) throw std::invalid_argument("eval: empty input");
  if (predictions.size() != truth.size())
    throw std::invalid_argument("eval: prediction/truth length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (truth[i] == 1)
      predictions[i] == 1 ? ++c.tp : ++c.fn;
    else
      predictions[i] == 1 ? ++c.fp : ++c.tn;
  }
  return c;
}

// One column of the comparison tables. runtime_seconds is informational and
// deliberately left out of the serialized report so reruns with the same
// config produce byte-identical files.
struct EvalReport {
  std::string model_name;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  int epochs = 0;
  std::string config_fingerprint;
  std::string manifest_hash;
  double runtime_seconds = 0.0;
};

inline nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["model"] = r.model_name;
  j["train_accuracy"] = r.train_accuracy;
  j["test_accuracy"] = r.test_accuracy;
  j["epochs"] = r.epochs;
  j["config_fingerprint"] = r.config_fingerprint;
  j["manifest_hash"] = r.manifest_hash;
  return j;
}

inline void write_report(const EvalReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("eval: cannot write " + path);
  out << report_to_json(r).dump(2) << "\n";
}

inline EvalReport read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("eval: cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  EvalReport r;
  r.model_name = j.at("model").get<std::string>();
  r.train_accuracy = j.at("train_accuracy").get<double>();
  r.test_accuracy = j.at("test_accuracy").get<double>();
  r.epochs = j.at("epochs").get<int>();
  r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  r.manifest_hash = j.at("manifest_hash").get<std::string>();
  return r;
}

struct ComparisonTable {
  std::string caption;
  std::string axis;  // models | embedding kinds | dimensions
  std::vector<EvalReport> reports;
};

namespace detail {
inline std::string fixed3(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << v;
  return os.str();
}
}  // namespace detail

// Rows Train/Test/Epochs, one column per report, accuracies to 3 decimals.
// All reports must come from the same dataset manifest.
inline ComparisonTable make_table(std::vector<EvalReport> reports, const std::string& caption,
                                  const std::string& axis) {
  if (reports.empty()) throw std::invalid_argument("eval: table needs at least one report");
  for (const EvalReport& r : reports)
    if (r.manifest_hash != reports.front().manifest_hash)
      throw std::runtime_error("eval: reports mix dataset manifests (" + r.model_name + ")");
  return ComparisonTable{caption, axis, std::move(reports)};
}

inline std::string table_to_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "metric";
  for (const EvalReport& r : t.reports) os << "," << r.model_name;
  os << "\nTrain";
  for (const EvalReport& r : t.reports) os << "," << detail::fixed3(r.train_accuracy);
  os << "\nTest";
  for (const EvalReport& r : t.reports) os << "," << detail::fixed3(r.test_accuracy);
  os << "\nEpochs";
  for (const EvalReport& r : t.reports) os << "," << r.epochs;
  os << "\n";
  return os.str();
}

inline std::string table_to_markdown(const ComparisonTable& t) {
  std::ostringstream os;
  os << "**" << t.caption << "**\n\n|  |";
  for (const EvalReport& r : t.reports) os << " " << r.model_name << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < t.reports.size(); ++i) os << "---|";
  os << "\n| Train |";
  for (const EvalReport& r : t.reports) os << " " << detail::fixed3(r.train_accuracy) << " |";
  os << "\n| Test |";
  for (const EvalReport& r : t.reports) os << " " << detail::fixed3(r.test_accuracy) << " |";
  os << "\n| Epochs |";
  for (const EvalReport& r : t.reports) os << " " << r.epochs << " |";
  os << "\n";
  return os.str();
}

}  // namespace twsent

#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace twsent {

// RFC 4180 row reader. Quoted fields may contain commas, escaped quotes
// ("") and embedded newlines. Returns std::nullopt at end of input.
// Rows whose quoting never terminates are reported by throwing; ragged
// rows are the caller's problem (the corpus loader counts and skips them).
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  std::optional<std::vector<std::string>> next_row() {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    int c;
    while ((c = in_.get()) != std::char_traits<char>::eof()) {
      saw_any = true;
      char ch = static_cast<char>(c);
      if (in_quotes) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"' && field.empty()) {
        in_quotes = true;
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (ch == '\n') {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(std::move(field));
        return fields;
      } else {
        field.push_back(ch);
      }
    }
    if (!saw_any) return std::nullopt;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(std::move(field));
    return fields;
  }

 private:
  std::istream& in_;
};

inline std::string csv_escape(const std::string& s) {
  bool needs_quotes = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace twsent

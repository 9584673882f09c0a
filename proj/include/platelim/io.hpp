#pragma once

// Deterministic tabular output: CSV with one '#' metadata preamble line and
// optional '#' summary trailers. All doubles printed with %.17g so identical
// runs produce identical bytes.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "platelim/core.hpp"

namespace platelim {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& vals) {
    if (vals.size() != header_.size()) throw Error("Table: row width mismatch");
    std::string line;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i) line += ',';
      line += fmt_double(vals[i]);
    }
    rows_.push_back(std::move(line));
  }

  void add_summary(const std::string& key, double value) {
    summaries_.push_back(key + "=" + fmt_double(value));
  }
  void add_summary(const std::string& key, const std::string& value) {
    summaries_.push_back(key + "=" + value);
  }

  void write(const std::string& path, const std::string& preamble) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("Table: cannot open " + path);
    f << "# " << preamble << "\n";
    for (std::size_t i = 0; i < header_.size(); ++i)
      f << (i ? "," : "") << header_[i];
    f << "\n";
    for (const auto& r : rows_) f << r << "\n";
    for (const auto& s : summaries_) f << "# summary " << s << "\n";
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
  std::vector<std::string> summaries_;
};

}  // namespace platelim

#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "ldg/error.hpp"

namespace ldg {

// %.17g round-trips every double through text exactly.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) fail(Errc::io_error, "cannot open for writing: " + path);
  }
  void raw(const std::string& line) { out_ << line << "\n"; }
  void field(double v) { sep(); out_ << fmt_double(v); }
  void field(int v) { sep(); out_ << v; }
  void field(const std::string& v) { sep(); out_ << v; }
  void end_row() { out_ << "\n"; first_ = true; }
  bool good() const { return out_.good(); }

 private:
  void sep() {
    if (!first_) out_ << ",";
    first_ = false;
  }
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace ldg

#ifndef VAROSC_IO_HPP_
#define VAROSC_IO_HPP_

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "varosc/errors.hpp"

namespace varosc {

// Round-trip float formatting: 17 significant digits.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_argument("cannot open output file: " + path);
  out << content;
  if (!out) throw resource_error("failed writing output file: " + path);
}

// One integer per line; blank lines ignored.
inline std::vector<std::int64_t> read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("cannot open sequence file: " + path);
  std::vector<std::int64_t> terms;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    try {
      terms.push_back(std::stoll(line.substr(a, b - a + 1)));
    } catch (const std::exception&) {
      throw invalid_argument("sequence file " + path + ": bad line '" + line + "'");
    }
  }
  if (terms.empty()) throw invalid_argument("sequence file " + path + " has no terms");
  return terms;
}

}  // namespace varosc

#endif  // VAROSC_IO_HPP_

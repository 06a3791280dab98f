// File helpers: TSV rows, label/truth files, small logging.
#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "namelab/text.hpp"

namespace namelab {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("NAMELAB_LOG");
    if (!env) return LogLevel::warn;
    const std::string v = env;
    if (v == "error") return LogLevel::error;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

inline void log_msg(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

// Reads all lines, splitting each on tabs. Skips blank lines and lines
// starting with '#'. Handles trailing CR from CRLF files.
inline std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    rows.push_back(split(line, '\t'));
  }
  return rows;
}

// Two-column TSV <key>\t<value> into an ordered map.
inline std::map<std::string, std::string> read_pair_tsv(
    const std::string& path) {
  std::map<std::string, std::string> out;
  for (const auto& row : read_tsv(path)) {
    if (row.size() < 2) continue;
    out[row[0]] = row[1];
  }
  return out;
}

inline void write_pair_tsv(const std::string& path,
                           const std::map<std::string, std::string>& pairs) {
  std::ostringstream out;
  for (const auto& [k, v] : pairs) out << k << '\t' << v << '\n';
  write_file(path, out.str());
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace namelab

#pragma once

// "VTPL v1" text format:
//
//   VTPL 1
//   source <id>
//   count <n>
//   <x> <y> <theta>      (n lines, 6 decimals, '\n' line ends)

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/minutiae.hpp"

namespace veinid {

namespace detail {

// Fixed 6-decimal rendering; negative zero prints as zero.
inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline double parse_double(std::string_view tok, const char* what) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw FormatError(std::string(what) + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

inline long long parse_count(std::string_view tok, const char* what) {
  long long v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end || v < 0) {
    throw FormatError(std::string(what) + ": bad count '" + std::string(tok) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t j = line.find(' ', i);
    if (i < line.size()) out.push_back(line.substr(i, (j == std::string_view::npos ? line.size() : j) - i));
    if (j == std::string_view::npos) break;
    i = j;
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidParameter("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidParameter("write failed for '" + path + "'");
}

}  // namespace detail

inline std::string format_vtpl(const Template& t) {
  if (t.source_id.find('\n') != std::string::npos) {
    throw InvalidParameter("vtpl: source id may not contain a newline");
  }
  std::string out = "VTPL 1\nsource " + t.source_id + "\ncount " + std::to_string(t.size()) + "\n";
  for (const auto& m : t.minutiae) {
    std::string theta = detail::fixed6(m.theta);
    if (theta == "360.000000") theta = "0.000000";
    out += detail::fixed6(m.x) + " " + detail::fixed6(m.y) + " " + theta + "\n";
  }
  return out;
}

inline Template parse_vtpl(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.size() < 3 || lines[0] != "VTPL 1") throw FormatError("vtpl: missing 'VTPL 1' header");
  if (lines[1].rfind("source ", 0) != 0) throw FormatError("vtpl: missing 'source' line");
  if (lines[2].rfind("count ", 0) != 0) throw FormatError("vtpl: missing 'count' line");
  Template t;
  t.source_id = lines[1].substr(7);
  const auto n = detail::parse_count(std::string_view(lines[2]).substr(6), "vtpl");
  if (lines.size() != static_cast<std::size_t>(n) + 3) {
    throw FormatError("vtpl: expected " + std::to_string(n) + " minutia lines");
  }
  for (long long i = 0; i < n; ++i) {
    const auto toks = detail::split_spaces(lines[3 + i]);
    if (toks.size() != 3) throw FormatError("vtpl: minutia line needs 3 fields");
    Minutia m{detail::parse_double(toks[0], "vtpl"), detail::parse_double(toks[1], "vtpl"),
              detail::parse_double(toks[2], "vtpl")};
    if (m.theta < 0.0 || m.theta >= 360.0) throw FormatError("vtpl: theta outside [0, 360)");
    t.minutiae.push_back(m);
  }
  return t;
}

inline Template read_vtpl(const std::string& path) { return parse_vtpl(detail::read_text_file(path)); }

inline void write_vtpl(const std::string& path, const Template& t) {
  detail::write_text_file(path, format_vtpl(t));
}

}  // namespace veinid

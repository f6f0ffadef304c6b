#pragma once

// Text form of PipelineConfig: one `key = value` per line, `#` starts a
// comment, blank lines are ignored. Unknown or repeated keys are errors.

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "veinid/error.hpp"
#include "veinid/pipeline.hpp"
#include "veinid/template_io.hpp"

namespace veinid {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline int parse_int(std::string_view tok, const std::string& key) {
  int v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError("config: " + key + " needs an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

struct ConfigKey {
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
ConfigKey real_key(T PipelineConfig::*member) {
  return {[member](PipelineConfig& c, std::string_view v) {
            c.*member = parse_double(v, "config");
          },
          [member](const PipelineConfig& c) { return format_real(c.*member); }};
}

inline ConfigKey int_key(int PipelineConfig::*member, const std::string& name) {
  return {[member, name](PipelineConfig& c, std::string_view v) { c.*member = parse_int(v, name); },
          [member](const PipelineConfig& c) { return std::to_string(c.*member); }};
}

inline const std::map<std::string, ConfigKey>& config_keys() {
  static const std::map<std::string, ConfigKey> keys = [] {
    std::map<std::string, ConfigKey> k;
    k["snake_eta1"] = {[](PipelineConfig& c, std::string_view v) { c.snake.eta1 = parse_double(v, "config"); },
                       [](const PipelineConfig& c) { return format_real(c.snake.eta1); }};
    k["snake_eta2"] = {[](PipelineConfig& c, std::string_view v) { c.snake.eta2 = parse_double(v, "config"); },
                       [](const PipelineConfig& c) { return format_real(c.snake.eta2); }};
    k["snake_step"] = {[](PipelineConfig& c, std::string_view v) { c.snake.step = parse_double(v, "config"); },
                       [](const PipelineConfig& c) { return format_real(c.snake.step); }};
    k["snake_max_iters"] = {
        [](PipelineConfig& c, std::string_view v) { c.snake.max_iters = parse_int(v, "snake_max_iters"); },
        [](const PipelineConfig& c) { return std::to_string(c.snake.max_iters); }};
    k["snake_converge_eps"] = {
        [](PipelineConfig& c, std::string_view v) { c.snake.converge_eps = parse_double(v, "config"); },
        [](const PipelineConfig& c) { return format_real(c.snake.converge_eps); }};
    k["snake_balloon"] = {
        [](PipelineConfig& c, std::string_view v) { c.snake.balloon = parse_double(v, "config"); },
        [](const PipelineConfig& c) { return format_real(c.snake.balloon); }};
    k["snake_points"] = {
        [](PipelineConfig& c, std::string_view v) {
          const int n = parse_int(v, "snake_points");
          if (n < 0) throw InvalidParameter("config: snake_points must be >= 16");
          c.snake_points = static_cast<std::size_t>(n);
        },
        [](const PipelineConfig& c) { return std::to_string(c.snake_points); }};
    k["crop_margin"] = int_key(&PipelineConfig::crop_margin, "crop_margin");
    k["impulse_median"] = int_key(&PipelineConfig::impulse_median, "impulse_median");
    k["gaussian_sigma"] = real_key(&PipelineConfig::gaussian_sigma);
    k["norm_mean"] = real_key(&PipelineConfig::norm_mean);
    k["norm_variance"] = real_key(&PipelineConfig::norm_variance);
    k["binarize_window"] = int_key(&PipelineConfig::binarize_window, "binarize_window");
    k["median_window"] = int_key(&PipelineConfig::median_window, "median_window");
    k["dilate_radius"] = int_key(&PipelineConfig::dilate_radius, "dilate_radius");
    k["spur_length"] = int_key(&PipelineConfig::spur_length, "spur_length");
    k["prune_min_size"] = int_key(&PipelineConfig::prune_min_size, "prune_min_size");
    k["merge_radius"] = real_key(&PipelineConfig::merge_radius);
    k["t1"] = {[](PipelineConfig& c, std::string_view v) { c.match.t1 = parse_double(v, "config"); },
               [](const PipelineConfig& c) { return format_real(c.match.t1); }};
    k["t2"] = {[](PipelineConfig& c, std::string_view v) { c.match.t2 = parse_double(v, "config"); },
               [](const PipelineConfig& c) { return format_real(c.match.t2); }};
    k["decision_threshold"] = {
        [](PipelineConfig& c, std::string_view v) { c.match.decision_threshold = parse_double(v, "config"); },
        [](const PipelineConfig& c) { return format_real(c.match.decision_threshold); }};
    return k;
  }();
  return keys;
}

}  // namespace detail

// Starts from the defaults and overrides the keys present in `text`.
inline PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  const auto& keys = detail::config_keys();
  std::set<std::string> seen;
  int line_no = 0;
  for (const auto& raw : detail::split_lines(std::string(text))) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw FormatError(where + ": expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw InvalidParameter(where + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw InvalidParameter(where + ": duplicate key '" + key + "'");
    if (value.empty()) throw FormatError(where + ": missing value for '" + key + "'");
    it->second.set(cfg, value);
  }
  cfg.validate();
  return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
  return parse_config(detail::read_text_file(path));
}

// Every key with its current value, in key order; parse_config reads it back.
inline std::string format_config(const PipelineConfig& cfg) {
  std::string out;
  for (const auto& [key, k] : detail::config_keys()) out += key + " = " + k.get(cfg) + "\n";
  return out;
}

}  // namespace veinid

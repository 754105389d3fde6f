#pragma once

// Run configuration. The config file is a flat TOML-style key/value file:
//
//   repo       = "path/to/repo"
//   out_dir    = "out"
//   threshold  = 0.05
//   extensions = [".java"]
//   alias_map  = "aliases.csv"        # optional
//   labels     = "labels.csv"         # optional
//   confounders = "metrics.csv"       # optional
//   windows    = ["1.0=v1.0", "2.0=v1.0..v2.0"]
//
// Relative paths are taken relative to the config file's directory. A window
// is written "[name=][predecessor..]release"; the name defaults to the
// release ref.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "codeown/error.hpp"
#include "codeown/io.hpp"
#include "codeown/miner.hpp"
#include "codeown/ownership.hpp"

namespace codeown {

struct RunConfig {
  fs::path repo_path;
  std::vector<ReleaseWindow> windows;
  double expertise_threshold = kDefaultExpertiseThreshold;
  std::vector<std::string> extensions{".java"};
  std::optional<fs::path> alias_map_path;
  std::optional<fs::path> labels_path;
  std::optional<fs::path> confounders_path;
  fs::path output_dir = "codeown-out";
  unsigned threads = 0;
};

inline ReleaseWindow parse_window_spec(const std::string& spec) {
  ReleaseWindow w;
  std::string rest = spec;
  if (auto eq = rest.find('='); eq != std::string::npos) {
    w.release_name = rest.substr(0, eq);
    rest = rest.substr(eq + 1);
    if (w.release_name.empty()) throw ConfigError("window '" + spec + "': empty release name");
  }
  if (auto dots = rest.find(".."); dots != std::string::npos) {
    w.predecessor_ref = rest.substr(0, dots);
    w.release_ref = rest.substr(dots + 2);
  } else {
    w.release_ref = rest;
  }
  if (w.release_ref.empty()) throw ConfigError("window '" + spec + "': empty release ref");
  if (w.release_name.empty()) w.release_name = w.release_ref;
  return w;
}

// Release names become file name stems.
inline std::string file_stem(const std::string& release_name) {
  std::string out;
  for (char c : release_name) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

inline std::vector<std::string> split_extensions(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    auto item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline void validate(const RunConfig& c) {
  if (!(c.expertise_threshold > 0.0 && c.expertise_threshold < 1.0))
    throw ConfigError("threshold must lie in (0, 1)");
  if (c.extensions.empty()) throw ConfigError("no file extensions configured");
  if (c.windows.empty()) throw ConfigError("no release windows configured");
  std::map<std::string, int> stems;
  for (const auto& w : c.windows)
    if (++stems[file_stem(w.release_name)] > 1)
      throw ConfigError("duplicate release name '" + w.release_name + "'");
}

namespace detail {

using ConfigValue = std::variant<std::string, double, bool, std::vector<std::string>>;

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline std::string parse_basic_string(const std::string& s, std::size_t& i, int line) {
  std::string out;
  ++i;  // opening quote
  while (i < s.size() && s[i] != '"') {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char e = s[++i];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '\\': out.push_back('\\'); break;
        case '"': out.push_back('"'); break;
        default: throw ConfigError("config line " + std::to_string(line) + ": unsupported escape");
      }
    } else {
      out.push_back(s[i]);
    }
    ++i;
  }
  if (i >= s.size()) throw ConfigError("config line " + std::to_string(line) + ": unterminated string");
  ++i;  // closing quote
  return out;
}

inline ConfigValue parse_value(const std::string& s, std::size_t& i, int line) {
  skip_ws(s, i);
  if (i >= s.size()) throw ConfigError("config line " + std::to_string(line) + ": missing value");
  if (s[i] == '"') return parse_basic_string(s, i, line);
  if (s[i] == '[') {
    std::vector<std::string> items;
    ++i;
    while (true) {
      skip_ws(s, i);
      if (i < s.size() && s[i] == ']') {
        ++i;
        break;
      }
      if (i >= s.size() || s[i] != '"')
        throw ConfigError("config line " + std::to_string(line) + ": arrays hold strings only");
      items.push_back(parse_basic_string(s, i, line));
      skip_ws(s, i);
      if (i < s.size() && s[i] == ',') ++i;
    }
    return items;
  }
  std::size_t end = i;
  while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '#') ++end;
  std::string word = s.substr(i, end - i);
  i = end;
  if (word == "true") return true;
  if (word == "false") return false;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(word, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != word.size())
    throw ConfigError("config line " + std::to_string(line) + ": cannot parse value '" + word + "'");
  return v;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text, const fs::path& base_dir = {}) {
  RunConfig c;
  std::map<std::string, int> seen;
  auto path_of = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };

  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::size_t i = 0;
    detail::skip_ws(line, i);
    if (i >= line.size() || line[i] == '#') continue;
    auto eq = line.find('=', i);
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = line.substr(i, eq - i);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (++seen[key] > 1) throw ConfigError("config: duplicate key '" + key + "'");
    i = eq + 1;
    auto value = detail::parse_value(line, i, line_no);
    detail::skip_ws(line, i);
    if (i < line.size() && line[i] != '#')
      throw ConfigError("config line " + std::to_string(line_no) + ": trailing characters");

    auto want_string = [&]() -> std::string {
      if (auto* s = std::get_if<std::string>(&value)) return *s;
      throw ConfigError("config: '" + key + "' must be a string");
    };
    auto want_list = [&]() -> std::vector<std::string> {
      if (auto* v = std::get_if<std::vector<std::string>>(&value)) return *v;
      if (auto* s = std::get_if<std::string>(&value)) return split_extensions(*s);
      throw ConfigError("config: '" + key + "' must be a list of strings");
    };
    auto want_number = [&]() -> double {
      if (auto* d = std::get_if<double>(&value)) return *d;
      throw ConfigError("config: '" + key + "' must be a number");
    };

    if (key == "repo") {
      c.repo_path = path_of(want_string());
    } else if (key == "out_dir") {
      c.output_dir = path_of(want_string());
    } else if (key == "threshold") {
      c.expertise_threshold = want_number();
    } else if (key == "extensions") {
      c.extensions = want_list();
    } else if (key == "alias_map") {
      c.alias_map_path = path_of(want_string());
    } else if (key == "labels") {
      c.labels_path = path_of(want_string());
    } else if (key == "confounders") {
      c.confounders_path = path_of(want_string());
    } else if (key == "threads") {
      double t = want_number();
      if (t < 0 || t != static_cast<unsigned>(t)) throw ConfigError("config: threads must be a whole number");
      c.threads = static_cast<unsigned>(t);
    } else if (key == "windows") {
      c.windows.clear();
      for (const auto& spec : want_list()) c.windows.push_back(parse_window_spec(spec));
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

inline RunConfig load_config(const fs::path& path) {
  return parse_config(read_file(path), path.has_parent_path() ? path.parent_path() : fs::path{});
}

}  // namespace codeown

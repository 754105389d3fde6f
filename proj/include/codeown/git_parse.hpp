#pragma once

// Parsers for the machine-readable output of git, as pure functions over
// captured text.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codeown/error.hpp"

namespace codeown::gitparse {

// Field separators used in the --format string of `git log`.
inline constexpr char kRecordMark = '\x1e';
inline constexpr char kFieldSep = '\x1f';

// Format passed to `git log` so parse_log can read it back.
inline constexpr std::string_view kLogFormat = "%x1e%H%x1f%P%x1f%aN%x1f%aE%x1f%at";

struct NumstatEntry {
  std::string path;
  std::uint64_t added = 0;
  std::uint64_t deleted = 0;
  bool binary = false;

  friend bool operator==(const NumstatEntry&, const NumstatEntry&) = default;
};

struct RawCommit {
  std::string hash;
  std::vector<std::string> parents;
  std::string author_name;
  std::string author_email;
  std::int64_t timestamp = 0;
  std::vector<NumstatEntry> changes;
};

// Undoes git's C-style path quoting ("a\tb", octal escapes for non-ASCII).
inline std::string unquote_path(std::string_view raw) {
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') return std::string(raw);
  std::string out;
  std::string_view body = raw.substr(1, raw.size() - 2);
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i >= body.size()) throw VcsError("dangling escape in quoted path: " + std::string(raw));
    char e = body[i];
    switch (e) {
      case 'a': out.push_back('\a'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'v': out.push_back('\v'); break;
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      default:
        if (e >= '0' && e <= '3' && i + 2 < body.size()) {
          int v = 0;
          for (int k = 0; k < 3; ++k) {
            char d = body[i + k];
            if (d < '0' || d > '7') throw VcsError("bad octal escape in path: " + std::string(raw));
            v = v * 8 + (d - '0');
          }
          out.push_back(static_cast<char>(v));
          i += 2;
        } else {
          throw VcsError("unknown escape in quoted path: " + std::string(raw));
        }
    }
  }
  return out;
}

inline std::uint64_t parse_count(std::string_view s, std::string_view line) {
  if (s.empty()) throw VcsError("numstat: empty count in '" + std::string(line) + "'");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw VcsError("numstat: bad count in '" + std::string(line) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

// "<added>\t<deleted>\t<path>", with "-" for both counts on binary files.
inline NumstatEntry parse_numstat_line(std::string_view line) {
  auto t1 = line.find('\t');
  auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos) throw VcsError("numstat: malformed line '" + std::string(line) + "'");
  auto added = line.substr(0, t1);
  auto deleted = line.substr(t1 + 1, t2 - t1 - 1);
  NumstatEntry e;
  e.path = unquote_path(line.substr(t2 + 1));
  if (added == "-" && deleted == "-") {
    e.binary = true;
  } else {
    e.added = parse_count(added, line);
    e.deleted = parse_count(deleted, line);
  }
  return e;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Parses `git log --format=<kLogFormat> --numstat` output.
inline std::vector<RawCommit> parse_log(std::string_view text) {
  std::vector<RawCommit> commits;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (line.empty()) continue;
    if (line.front() == kRecordMark) {
      auto fields = split(line.substr(1), kFieldSep);
      if (fields.size() != 5) throw VcsError("log: malformed commit header");
      RawCommit c;
      c.hash = std::string(fields[0]);
      if (!fields[1].empty())
        for (auto p : split(fields[1], ' ')) c.parents.emplace_back(p);
      c.author_name = std::string(fields[2]);
      c.author_email = std::string(fields[3]);
      try {
        c.timestamp = std::stoll(std::string(fields[4]));
      } catch (const std::exception&) {
        throw VcsError("log: bad timestamp for " + c.hash);
      }
      commits.push_back(std::move(c));
      continue;
    }
    if (commits.empty()) throw VcsError("log: numstat line before any commit header");
    commits.back().changes.push_back(parse_numstat_line(line));
  }
  return commits;
}

// Per-author line totals from `git blame --line-porcelain`.
struct BlameCounts {
  // (author name, author email) -> lines
  std::map<std::pair<std::string, std::string>, std::uint64_t> by_author;
  std::uint64_t total_lines = 0;
};

inline bool is_hex(std::string_view s) {
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return !s.empty();
}

// Each group starts with "<sha> <orig> <final> [<count>]", carries header
// fields, and ends with the line content prefixed by a TAB.
inline BlameCounts parse_line_porcelain(std::string_view text) {
  BlameCounts counts;
  std::string name, mail;
  bool in_group = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;

    if (!in_group) {
      if (line.empty()) continue;
      auto sp = line.find(' ');
      if (sp == std::string_view::npos || !is_hex(line.substr(0, sp)))
        throw VcsError("blame: expected group header, got '" + std::string(line) + "'");
      in_group = true;
      name.clear();
      mail.clear();
      continue;
    }
    if (!line.empty() && line.front() == '\t') {
      ++counts.by_author[{name, mail}];
      ++counts.total_lines;
      in_group = false;
      continue;
    }
    if (line.starts_with("author-mail ")) {
      std::string_view m = line.substr(12);
      if (m.size() >= 2 && m.front() == '<' && m.back() == '>') m = m.substr(1, m.size() - 2);
      mail = std::string(m);
    } else if (line.starts_with("author ")) {
      name = std::string(line.substr(7));
    }
  }
  if (in_group) throw VcsError("blame: truncated output (group without content line)");
  return counts;
}

}  // namespace codeown::gitparse

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "codeown/csv.hpp"
#include "codeown/error.hpp"

namespace codeown {

struct DeveloperIdentity {
  std::string key;           // canonical, never empty
  std::string display_name;
  std::string email;

  friend bool operator==(const DeveloperIdentity&, const DeveloperIdentity&) = default;
};

inline std::string normalize_key(std::string_view raw) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0, e = raw.size();
  while (b < e && is_space(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string out(raw.substr(b, e - b));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Normalized raw key -> canonical key. Chains are collapsed at construction so
// a single lookup is enough and resolution stays idempotent.
class AliasMap {
 public:
  AliasMap() = default;

  AliasMap(std::initializer_list<std::pair<const std::string, std::string>> raw)
      : AliasMap(std::map<std::string, std::string>(raw)) {}

  explicit AliasMap(const std::map<std::string, std::string>& raw) {
    std::map<std::string, std::string> direct;
    for (const auto& [from, to] : raw) {
      auto f = normalize_key(from);
      auto t = normalize_key(to);
      if (f.empty() || t.empty()) throw ConfigError("alias map: empty key");
      if (f != t) direct[f] = t;
    }
    for (const auto& [from, to] : direct) {
      std::string target = to;
      std::set<std::string> seen{from};
      while (true) {
        auto it = direct.find(target);
        if (it == direct.end()) break;
        if (!seen.insert(target).second)
          throw ConfigError("alias map: cycle through '" + from + "'");
        target = it->second;
      }
      map_[from] = target;
    }
  }

  const std::string& apply(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? key : it->second;
  }

  const std::map<std::string, std::string>& entries() const { return map_; }
  bool empty() const { return map_.empty(); }

 private:
  std::map<std::string, std::string> map_;
};

// Two columns (raw_key, canonical_key) with a header row.
inline AliasMap parse_alias_map(std::string_view text) {
  auto table = csv::parse(text);
  if (table.header.size() != 2)
    throw ConfigError("alias map: expected 2 columns (raw_key, canonical_key)");
  std::map<std::string, std::string> raw;
  for (const auto& row : table.rows) {
    auto key = normalize_key(row[0]);
    if (!raw.emplace(key, row[1]).second)
      throw ConfigError("alias map: duplicate raw key '" + key + "'");
  }
  return AliasMap(raw);
}

inline AliasMap load_alias_map(const fs::path& path) { return parse_alias_map(read_file(path)); }

// Email-first key: lowercased, trimmed email when present, else the name.
// `context` names the record (usually a commit hash) in the error message.
inline DeveloperIdentity resolve_identity(std::string_view name, std::string_view email,
                                          const AliasMap& aliases = {},
                                          std::string_view context = {}) {
  std::string key = normalize_key(email);
  if (key.empty()) key = normalize_key(name);
  if (key.empty()) {
    std::string msg = "developer has neither name nor email";
    if (!context.empty()) msg += " (" + std::string(context) + ")";
    throw ConfigError(msg);
  }
  key = aliases.apply(key);
  return DeveloperIdentity{std::move(key), std::string(name), std::string(email)};
}

}  // namespace codeown

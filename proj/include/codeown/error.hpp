#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace codeown {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or input. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The version-control tool failed or the repository is unreadable. CLI exit code 3.
class VcsError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A statistic is undefined for the given input (e.g. correlation of a constant vector).
class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

// Collects non-fatal messages.
struct Diagnostics {
  std::vector<std::string> messages;

  void note(std::string msg) { messages.push_back(std::move(msg)); }
  bool empty() const { return messages.empty(); }
};

}  // namespace codeown

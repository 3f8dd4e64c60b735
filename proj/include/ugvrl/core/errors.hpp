#pragma once

#include <stdexcept>
#include <string>

namespace ugvrl {

/// Invalid or inconsistent configuration (scenario files, model/experiment mismatch).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation violated a domain rule, e.g. an action aimed at the wrong kind of component.
class DomainError : public std::logic_error {
 public:
  explicit DomainError(const std::string& what) : std::logic_error(what) {}
};

/// Non-finite weights, losses, or diverging value estimates.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or truncated persisted artifacts.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ugvrl

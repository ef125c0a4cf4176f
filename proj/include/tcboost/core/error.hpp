#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tcboost {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (edge lists, CSV, config files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid parameter values or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Out-of-range node ids and similar contract violations.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Exact enumeration would exceed its size budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcboost

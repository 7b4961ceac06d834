#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cner {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (column files, templates, model files, config files).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A span set that the requested tagging scheme cannot express.
class RepresentabilityError : public Error {
 public:
  using Error::Error;
};

/// A label sequence that violates its scheme grammar.
class ValidityError : public Error {
 public:
  ValidityError(std::size_t position, const std::string& rule)
      : Error("invalid label at position " + std::to_string(position) + " (" + rule + ")"),
        position_(position),
        rule_(rule) {}
  std::size_t position() const { return position_; }
  const std::string& rule() const { return rule_; }

 private:
  std::size_t position_;
  std::string rule_;
};

/// Non-finite values or non-converging numerical routines.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (flags, option combinations, missing files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Line search failed even after an L-BFGS restart. Carries the last iterate.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, std::vector<double> last_weights)
      : Error(what), last_weights_(std::move(last_weights)) {}
  const std::vector<double>& last_weights() const { return last_weights_; }

 private:
  std::vector<double> last_weights_;
};

}  // namespace cner

#pragma once

#include <stdexcept>
#include <string>

namespace vista {

// Base of every error the toolkit throws. Each subclass maps to one failure
// family so callers (and the CLI) can branch on the kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or ill-typed field in a JSON document. `path` is a JSON pointer-ish
// location such as "actors[1].trigger.radius".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Invariant violation in an otherwise well-formed document.
class ValidationError : public Error {
 public:
  ValidationError(std::string rule, const std::string& what)
      : Error(rule + ": " + what), rule_(std::move(rule)) {}
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

class UnsupportedManeuver : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class PolicyError : public Error {
 public:
  using Error::Error;
};

// Malformed simulation log. `line` is 1-based, 0 when not attributable.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vista

#pragma once

#include <stdexcept>
#include <string>

namespace battleflow {

/// Base class for all pipeline errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A JSON document is missing a field or a field has the wrong type.
/// `path()` is a JSONPath-like locator such as `$.units[3].samples[0]`.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A well-typed document violates a data-model invariant. `subject()` names
/// the offending id (unit, team or event index).
class ValidationError : public Error {
 public:
  ValidationError(std::string subject, const std::string& what)
      : Error(subject + ": " + what), subject_(std::move(subject)) {}
  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class OutOfBounds : public Error {
 public:
  using Error::Error;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class IsolatedNode : public Error {
 public:
  using Error::Error;
};

class InconsistentInput : public Error {
 public:
  using Error::Error;
};

}  // namespace battleflow

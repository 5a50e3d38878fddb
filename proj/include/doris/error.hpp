#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace doris {

// Base for every error raised by the library. `subject` names the offending
// id, token, path or line so callers can report it without parsing `what()`.
class Error : public std::runtime_error {
 public:
  Error(std::string message, std::string subject = {})
      : std::runtime_error(std::move(message)), subject_(std::move(subject)) {}

  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Bad caller input that is not tied to a particular file format
// (invalid query, invalid configuration value, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace doris

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lexpand {

enum class ErrorKind {
  validation,  // bad arguments, unmet preconditions, missing inputs
  data,        // malformed or inconsistent input data
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::validation, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::data, message) {}
};

}  // namespace lexpand

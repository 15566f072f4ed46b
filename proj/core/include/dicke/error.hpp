#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dicke {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter record or argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Integration produced NaN/Inf or drifted past an abort threshold.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, std::string key, const std::string& message)
      : Error(format(line, key, message)), line_(line), key_(std::move(key)) {}

  // 0 when the error is not tied to a particular line.
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  static std::string format(std::size_t line, const std::string& key, const std::string& message) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "'" + key + "': ";
    return out + message;
  }

  std::size_t line_;
  std::string key_;
};

}  // namespace dicke

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace qgossip {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidEdge : public Error {
 public:
  using Error::Error;
};

/// Initial values fall outside the quantizer range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A real-valued consensus check was requested without a tolerance.
class MissingTolerance : public Error {
 public:
  MissingTolerance() : Error("real-mode consensus check requires a tolerance") {}
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

class DisconnectedTopology : public Error {
 public:
  explicit DisconnectedTopology(std::size_t attempts)
      : Error("random geometric graph still disconnected after " + std::to_string(attempts) +
              " attempts"),
        attempts_(attempts) {}

  std::size_t attempts() const noexcept { return attempts_; }

 private:
  std::size_t attempts_;
};

/// Bad command-line or config-file input. `key()` names the offending option.
class UsageError : public Error {
 public:
  UsageError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qgossip

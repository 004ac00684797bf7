#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rollout produced non-finite state values.
class DivergedError : public Error {
 public:
  explicit DivergedError(int step)
      : Error("simulation diverged at step " + std::to_string(step)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class CapabilityMissing : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; `field` is a JSON-pointer-like path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace asal

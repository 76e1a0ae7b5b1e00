#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace terzatic {

/// Malformed input: bad weights, points outside [0, a], shape mismatches,
/// unparsable literals. `path` names the offending field when known.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& message, std::string path = {})
      : std::invalid_argument(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A function was asked for a value outside the set it is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A tensor enumeration would visit more multi-indices than the configured cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::size_t requested, std::size_t cap)
      : std::runtime_error("enumeration of " + std::to_string(requested) +
                           " multi-indices exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/// A transcendental function family was requested in exact rational mode.
class NotExactError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace terzatic

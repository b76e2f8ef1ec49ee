#pragma once

#include <stdexcept>
#include <string>

namespace logevo {

// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised for parameter combinations the library deliberately does not cover
// (e.g. a data family without a tabulated transform in the requested dimension).
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace logevo

#pragma once

#include <stdexcept>
#include <string>

namespace chansim {

// Bad user input: invalid distributions, malformed files, out-of-range args.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or codebook size limit was exceeded. Limits are configuration;
// exceeding one is an error, never a silent fallback to sampling.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

// A quantity that is provably true for all valid inputs failed numerically.
// Signals an implementation bug, not a property of the data.
class InternalCheckError : public std::logic_error {
 public:
  explicit InternalCheckError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace chansim

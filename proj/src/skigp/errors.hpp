#pragma once

#include <stdexcept>
#include <string>

namespace skigp {

// Structural requirement violated (non-equispaced axis, wrong matrix form, ...).
// Callers that can fall back to a dense path catch this.
class StructureError : public std::runtime_error {
 public:
  explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure after the configured retries (not PD, singular, NaN).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skigp

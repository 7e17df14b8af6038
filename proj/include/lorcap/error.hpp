#pragma once

#include <stdexcept>
#include <string>

namespace lorcap {

/// Raised when an argument violates an operation's precondition
/// (negative level, t <= 0, q = inf where a finite q is required, ...).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a geometric object is malformed: overlapping components,
/// a compact interval not contained in any open component, bad nesting.
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace lorcap

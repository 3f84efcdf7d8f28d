#pragma once

#include <stdexcept>
#include <string>

namespace liegauge {

/// Malformed or inconsistent algebra input (bad JSON, conflicting constants,
/// out-of-range indices, Jacobi failure).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation needed a nondegenerate Killing metric and did not get one.
class DegenerateKilling : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Frame or metric too ill-conditioned for trustworthy finite differences,
/// or a chart that leaves the safe region of its frame.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace liegauge

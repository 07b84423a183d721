#pragma once

#include <stdexcept>
#include <string>

namespace sqeddy {

/// Invalid user-facing input (domain parameters, cutoffs, config files).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: no bracket, eigensolver or fixed-point
/// non-convergence, singular resolvent, broken theorem hypothesis.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed identity or certificate exceeded its threshold.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqeddy

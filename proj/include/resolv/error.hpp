#pragma once

#include <stdexcept>
#include <string>

namespace resolv {

/// Argument outside the mathematical domain of an operation (e.g. p > 1/2 for H2).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Alphabet sizes or sequence lengths that do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dense sequence distribution or an exact enumeration would exceed its cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// No input distribution reproduces the requested output marginal.
class InfeasibleTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a value it cannot aggregate (e.g. an infinite divergence sample).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace resolv

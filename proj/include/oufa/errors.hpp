#pragma once

#include <stdexcept>
#include <string>

namespace oufa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the operation (θ ≤ 0, T ≤ e, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two grids that must agree do not (segment length vs. path step,
/// T not a multiple of Δt, operands on different segment grids).
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// The MLE denominator Σ ξ_i² Δt vanished (identically-zero path).
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration document.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An output location could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_domain(const std::string& what);

}  // namespace oufa

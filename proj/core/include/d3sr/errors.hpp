#ifndef D3SR_ERRORS_HPP
#define D3SR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace d3sr {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Configuration rejected by validation (bad field value, missing block, ...).
struct InvalidConfig : Error {
  using Error::Error;
};

// Config file could not be parsed; carries file/line context in the message.
struct ConfigError : Error {
  using Error::Error;
};

// Slant range shorter than platform height.
struct RangeBelowHeight : Error {
  using Error::Error;
};

// Look/cone angle combination has no real Doppler solution beyond tolerance.
struct InconsistentGeometry : Error {
  using Error::Error;
};

// Angle-Doppler grid has fewer cells than the space-time product.
struct GridTooCoarse : Error {
  using Error::Error;
};

// Operand dimensions do not agree.
struct DimensionMismatch : Error {
  using Error::Error;
};

// Requested frequency lies outside the grid axes.
struct OutOfRange : Error {
  using Error::Error;
};

// All singular values fell below the truncation cutoff (or operand is zero).
struct NumericalBreakdown : Error {
  using Error::Error;
};

// Pruning removed every active cell and restarts are exhausted.
struct EmptySupport : Error {
  using Error::Error;
};

// Constraint set admits no solution.
struct Infeasible : Error {
  using Error::Error;
};

// Covariance factorization failed.
struct SingularCovariance : Error {
  using Error::Error;
};

// Subaperture geometry leaves no valid cancellation rows.
struct DimensionError : Error {
  using Error::Error;
};

// Artifact file missing, unwritable, or malformed.
struct FileError : Error {
  using Error::Error;
};

}  // namespace d3sr

#endif  // D3SR_ERRORS_HPP

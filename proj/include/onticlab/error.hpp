#pragma once

#include <stdexcept>
#include <string>

namespace onticlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live in spaces of different dimension.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A value violates a documented invariant (norm, hermiticity, range ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Two tabulated functions refer to different ontic grids.
class GridMismatch : public Error {
public:
  using Error::Error;
};

/// Eigendecomposition or another numerical kernel did not converge.
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace onticlab

#pragma once

#include <stdexcept>
#include <string>

#include "topoquench/types.hpp"

namespace topoquench {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range model parameter.
struct InvalidParameterError : Error {
  using Error::Error;
};

/// Models combined with mismatched dimensions.
struct InvalidCompositionError : Error {
  using Error::Error;
};

/// Eigendecomposition or other numeric kernel failed.
struct NumericError : Error {
  using Error::Error;
};

/// Spectral gap closed at a grid point during state preparation.
struct DegenerateSpectrumError : Error {
  Momentum where;
  DegenerateSpectrumError(const std::string& msg, Momentum k)
      : Error(msg), where(k) {}
};

/// Neighbor overlap fell below the admissibility floor; the grid is too
/// coarse for the lattice index to be well-defined.
struct InadmissibleGridError : Error {
  Momentum worst_k;
  double worst_overlap = 0.0;
  InadmissibleGridError(const std::string& msg, Momentum k, double overlap)
      : Error(msg), worst_k(k), worst_overlap(overlap) {}
};

/// A required symmetry relation (TRS pairing, C_up + C_down = 0, ...) does
/// not hold on the given data.
struct SymmetryViolationError : Error {
  using Error::Error;
};

/// Grid not symmetric under k -> -k, or trajectory fields on mismatched
/// grids.
struct InvalidGridError : Error {
  using Error::Error;
};

/// Malformed run configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace topoquench

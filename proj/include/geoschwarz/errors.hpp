#pragma once

#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoschwarz {

/// Base class of every failure reported by the geometry and solver layers.
class GeodesicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Endpoints are (numerically) antipodal, so the minimizing geodesic is not unique.
class NonUniqueGeodesic : public GeodesicError {
 public:
  using GeodesicError::GeodesicError;
};

class DegenerateRetraction : public GeodesicError {
 public:
  using GeodesicError::GeodesicError;
};

class DegenerateInitialization : public GeodesicError {
 public:
  using GeodesicError::GeodesicError;
};

/// Single shooting stopped without reaching its tolerance. `trace` holds the
/// endpoint residual norm after every accepted iterate (entry 0 is the start).
class ShootingDidNotConverge : public GeodesicError {
 public:
  ShootingDidNotConverge(const std::string& what, std::vector<double> trace)
      : GeodesicError(what), trace(std::move(trace)) {}
  std::vector<double> trace;
};

class SingularJacobian : public GeodesicError {
 public:
  SingularJacobian(const std::string& what, int block_row, double rcond)
      : GeodesicError(what), block_row(block_row), rcond(rcond) {}
  int block_row;
  double rcond;
};

class KrylovDidNotConverge : public GeodesicError {
 public:
  KrylovDidNotConverge(const std::string& what, std::vector<double> history)
      : GeodesicError(what), history(std::move(history)) {}
  std::vector<double> history;
};

/// A midpoint (or segment logarithm) failed for waypoint `index`; the
/// underlying failure is kept in `cause`.
class SegmentError : public GeodesicError {
 public:
  SegmentError(const std::string& what, int index, std::exception_ptr cause)
      : GeodesicError(what), index(index), cause(std::move(cause)) {}
  int index;
  std::exception_ptr cause;
};

}  // namespace geoschwarz

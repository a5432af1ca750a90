#ifndef TPFA_ERRORS_HPP
#define TPFA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tpfa {

/// Base class for all library errors
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mesh construction and validation failures
struct MeshError : Error {
  using Error::Error;
};

/// Segment [x_K, x_L] not orthogonal to the shared face
struct OrthogonalityViolation : MeshError {
  using MeshError::MeshError;
};

/// Cell point not strictly inside its cell
struct PointOutsideCell : MeshError {
  using MeshError::MeshError;
};

/// Face shared by more than two cells, or inconsistent face-cell links
struct NonConformity : MeshError {
  using MeshError::MeshError;
};

/// Zero face measure or nonpositive cell-face distance
struct DegenerateGeometry : MeshError {
  using MeshError::MeshError;
};

/// Generated triangle whose circumcenter exits the triangle
struct NonAcutePattern : MeshError {
  using MeshError::MeshError;
};

/// Malformed mesh or config file
struct ParseError : Error {
  using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget
struct QuadratureFailure : Error {
  using Error::Error;
};

/// Conjugate gradients exceeded its iteration cap
struct SolverDivergence : Error {
  using Error::Error;
};

/// Field attached to a different mesh than the one operated on
struct DataMisalignment : Error {
  using Error::Error;
};

/// Argument outside a function's mathematical domain
struct DomainError : Error {
  using Error::Error;
};

/// Evaluation exactly at the singular center
struct SingularPoint : DomainError {
  using DomainError::DomainError;
};

/// Gradient evaluation on a diagonal where the max-branch switches
struct DiagonalPoint : DomainError {
  using DomainError::DomainError;
};

/// Interpolation point hits a point where the function is undefined
struct UndefinedValue : Error {
  using Error::Error;
};

/// Closed form requested from an oracle that does not provide it
struct OracleMissing : Error {
  using Error::Error;
};

/// Time-coupling fixed point failed to converge
struct FixedPointStall : Error {
  using Error::Error;
};

/// An unconditional inequality failed numerically (implementation bug)
struct BoundViolation : Error {
  using Error::Error;
};

}  // namespace tpfa

#endif

#ifndef TPFA_SPACE_HPP
#define TPFA_SPACE_HPP

#include <vector>

#include "tpfa/field.hpp"
#include "tpfa/quadrature.hpp"

namespace tpfa {

/// Normal difference quotient (u_sigma - u_K)/d_{K,sigma} on every cone.
ConeField normal_difference(const DiscreteField& u);

/// Discrete norm: sqrt(dim) * l2 norm of the normal difference quotient.
double discrete_norm(const DiscreteField& u);

/// Inner product sum_cones (|sigma|/d)(w_sigma - w_K)(v_sigma - v_K).
double discrete_inner(const DiscreteField& w, const DiscreteField& v);

enum class FaceRule { Point, Harmonic };

/// Samples a function into the discrete space: cell points for cells, the
/// orthogonal crossing point (Point) or distance-weighted cell values
/// (Harmonic) for interior faces; boundary faces stay zero. Throws
/// UndefinedValue when phi reports a domain error at a sample point.
DiscreteField canonical_interpolant(const AdmissibleMesh& mesh, const ScalarField& phi,
                                    FaceRule rule = FaceRule::Point);

/// Cellwise reconstructed gradient (1/|K|) sum_sigma |sigma| (xbar_sigma - x_K)
/// (u_sigma - u_K)/d_{K,sigma}; multiplied by dim when factor_dim is set.
std::vector<Point> consistent_gradient(const DiscreteField& u, bool factor_dim = false);

}  // namespace tpfa

#endif

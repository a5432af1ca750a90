#ifndef TPFA_QUADRATURE_HPP
#define TPFA_QUADRATURE_HPP

#include <functional>

#include "tpfa/mesh.hpp"

namespace tpfa {

using ScalarField = std::function<double(const Point&)>;

/// Seven-point degree-5 rule on the triangle (a, b, c)
double integrate_triangle(const ScalarField& f, const Point& a, const Point& b,
                          const Point& c);

/// Triangle rule with dyadic refinement toward vertex a (levels >= 0);
/// the uncovered sliver at a after `levels` halvings is integrated by the
/// plain rule, so integrable vertex singularities converge as levels grow.
double integrate_triangle_toward_vertex(const ScalarField& f, const Point& a,
                                        const Point& b, const Point& c, int levels);

/// Adaptive Simpson on the segment [p, q] to relative tolerance rel_tol;
/// throws QuadratureFailure when the subdivision depth budget is exhausted.
double integrate_segment(const ScalarField& f, const Point& p, const Point& q,
                         double rel_tol = 1e-10, int max_depth = 48);

/// Integral of f over cell K, fanned from the cell point into triangles;
/// cells whose closure contains `special` are refined dyadically toward it.
double integrate_cell(const AdmissibleMesh& mesh, int K, const ScalarField& f,
                      const Point* special = nullptr, int levels = 3);

}  // namespace tpfa

#endif

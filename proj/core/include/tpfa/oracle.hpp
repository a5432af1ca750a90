#ifndef TPFA_ORACLE_HPP
#define TPFA_ORACLE_HPP

#include <functional>
#include <optional>

#include "tpfa/field.hpp"
#include "tpfa/quadrature.hpp"

namespace tpfa {

using VectorField = std::function<Point(const Point&)>;

/// Exact-solution data provider: closed-form overrides where available,
/// quadrature fallbacks otherwise.
struct ExactSolutionOracle {
  ScalarField value;
  VectorField gradient;
  /// Point toward which cell quadrature is refined dyadically (e.g. where the
  /// solution is singular), with `refine_levels` halvings.
  std::optional<Point> special;
  int refine_levels = 3;

  std::function<double(const AdmissibleMesh&, int)> cone_mean_override;
  std::function<Point(const AdmissibleMesh&, int)> cell_gradient_integral_override;
  std::function<double(const AdmissibleMesh&)> grad_sq_override;

  /// Integral of the value over cell K.
  double cell_integral(const AdmissibleMesh& m, int K) const;
  /// Mean of grad(value) . n over the cone, computed by reducing the volume
  /// integral to a boundary integral of the value when no override is set.
  double cone_normal_mean(const AdmissibleMesh& m, int cone) const;
  /// All cone means at once (parallel over cones).
  ConeField mean_normal_gradient(const AdmissibleMesh& m) const;
  /// Integral of grad(value) over cell K via face integrals of the value.
  Point cell_gradient_integral(const AdmissibleMesh& m, int K) const;
  /// Squared L2 norm of grad(value) over the whole domain.
  double grad_sq_norm(const AdmissibleMesh& m) const;
  /// L2 distance between the value and a piecewise-constant cell vector.
  double l2_error(const AdmissibleMesh& m, const Eigen::VectorXd& cells) const;
};

/// Right-hand-side data f + div F in integrated form.
struct SteadyData {
  /// Integral of f over cell K (null means f = 0).
  std::function<double(const AdmissibleMesh&, int)> load_integral;
  /// Mean of F . n over the cone (null means F = 0).
  std::function<double(const AdmissibleMesh&, int)> flux_mean;
};

/// Data of an H_div field: cone normal means and cell divergence integrals.
struct HdivOracle {
  std::function<double(const AdmissibleMesh&, int)> normal_mean;
  std::function<double(const AdmissibleMesh&, int)> div_integral;
};

/// The field grad(exact) + F whose conformity defect the scheme measures;
/// its divergence integral is -load by the equation.
HdivOracle scheme_conformity_data(const ExactSolutionOracle& exact,
                                  const SteadyData& data);

/// u(x) = g . x + c
ExactSolutionOracle make_affine(const Point& g, double c);

/// u(x) = sin(pi x1) sin(pi x2) on the unit square; grad_sq closed form.
ExactSolutionOracle make_sin_sin();

/// Load data for -Laplace(u) = f with the sin-sin solution and F = 0.
SteadyData sin_sin_load();

}  // namespace tpfa

#endif

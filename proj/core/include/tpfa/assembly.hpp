#ifndef TPFA_ASSEMBLY_HPP
#define TPFA_ASSEMBLY_HPP

#include <Eigen/Sparse>

#include "tpfa/field.hpp"
#include "tpfa/oracle.hpp"

namespace tpfa {

/// Cell-only operator obtained by eliminating the interior face unknowns;
/// symmetric positive definite with nonpositive off-diagonal entries.
/// mass_scale adds mass_scale*|K| to the diagonal (implicit time stepping);
/// the face recovery weights are unaffected because faces carry no mass.
struct TpfaOperator {
  const AdmissibleMesh* mesh = nullptr;
  double mass_scale = 0.0;
  Eigen::SparseMatrix<double> matrix;
  /// w_sigma = face_c0[i]*w_K + face_c1[i]*w_L + data source, K the lower cell
  Eigen::VectorXd face_c0, face_c1;
};

TpfaOperator assemble_operator(const AdmissibleMesh& mesh, double mass_scale = 0.0);

/// Linear functional l(v) = sum_K a_K v_K + sum_cones b_c (v_sigma - v_K).
struct FunctionalData {
  const AdmissibleMesh* mesh = nullptr;
  Eigen::VectorXd a;
  Eigen::VectorXd b;

  FunctionalData() = default;
  explicit FunctionalData(const AdmissibleMesh& m);

  double operator()(const DiscreteField& v) const;
};

/// a_K = integral of f over K, b_c = -|sigma| * mean flux through the cone.
FunctionalData steady_functional(const AdmissibleMesh& m, const SteadyData& data);

/// l(v) = int(div(phi) v + phi . grad_T v): a_K = cell divergence integral,
/// b_c = |sigma| * cone normal mean.
FunctionalData conformity_functional(const AdmissibleMesh& m, const HdivOracle& phi);

/// l(v) = sum_K |K| g_K v_K.
FunctionalData mass_functional(const AdmissibleMesh& m, const Eigen::VectorXd& g);

/// Conjugate gradients with Jacobi preconditioner (relative residual 1e-12,
/// at most 10n iterations); dense Cholesky fallback up to 2000 cells,
/// otherwise SolverDivergence.
Eigen::VectorXd solve_cells(const TpfaOperator& op, const Eigen::VectorXd& rhs);

/// Eliminate, solve for the cells, recover the face values.
DiscreteField solve(const TpfaOperator& op, const FunctionalData& l);

/// Riesz representative of l in the discrete inner product (mass_scale 0).
DiscreteField riesz(const AdmissibleMesh& mesh, const FunctionalData& l);

/// sqrt(l(riesz(l))), clipped at zero; op must carry no mass term.
double dual_norm(const TpfaOperator& op, const FunctionalData& l);
double dual_norm(const AdmissibleMesh& mesh, const FunctionalData& l);

/// Riesz lift of cell values: <lift, w>_T = sum |K| g_K w_K for all w.
DiscreteField discrete_riesz_lift(const TpfaOperator& op, const Eigen::VectorXd& g);

/// Max abs stationarity residual of mass<w,v>_L2 + <w,v>_T = l(v) over the
/// cell and interior-face equations.
double weak_residual(const TpfaOperator& op, const DiscreteField& w,
                     const FunctionalData& l);

}  // namespace tpfa

#endif

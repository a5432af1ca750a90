#ifndef TPFA_TRANSIENT_HPP
#define TPFA_TRANSIENT_HPP

#include <vector>

#include "tpfa/analysis.hpp"

namespace tpfa {

struct TimeGrid {
  double horizon = 1.0;
  int steps = 1;
  double dt() const { return horizon / steps; }
};

/// Contractive coupling between the initial and final states:
/// initial - factor * final = data.
struct CouplingMap {
  enum class Kind { Zero, Identity, Scaled };
  Kind kind = Kind::Zero;
  double lambda = 0.0;
  double factor() const;
};

CouplingMap coupling_zero();
CouplingMap coupling_identity();
/// Throws DomainError unless lambda is in [0, 1].
CouplingMap coupling_scaled(double lambda);

/// States u^(0), ..., u^(N); slab m covers ((m-1)k, mk].
struct SpaceTimeField {
  const AdmissibleMesh* mesh = nullptr;
  TimeGrid grid;
  std::vector<DiscreteField> at;
};

/// Slab-averaged scheme data plus the coupling condition.
struct TransientProblemData {
  const AdmissibleMesh* mesh = nullptr;
  TimeGrid grid;
  std::vector<FunctionalData> slab;  ///< index m-1 holds slab m
  Eigen::VectorXd xi0;               ///< cell means of the coupling datum
  CouplingMap coupling;
};

/// Time-dependent right-hand side in integrated spatial form.
struct TimeDependentData {
  /// Integral of f(., t) over cell K.
  std::function<double(const AdmissibleMesh&, int, double)> load_integral;
  /// Mean of F(., t) . n over a cone.
  std::function<double(const AdmissibleMesh&, int, double)> flux_mean;
};

/// Slab averages by 3-point Gauss in time composed with the spatial
/// reductions.
TransientProblemData time_average_data(const TimeDependentData& data,
                                       const AdmissibleMesh& mesh,
                                       const TimeGrid& grid,
                                       Eigen::VectorXd xi0, CouplingMap phi);

/// Slab functional with the history term |K| prev_K / k added to the loads.
FunctionalData with_history(const FunctionalData& slab, const DiscreteField& prev,
                            double k);

/// One implicit step: op must carry mass_scale = 1/k.
DiscreteField step(const TpfaOperator& op, const FunctionalData& slab,
                   const DiscreteField& prev);

/// Lift cell values into the discrete space with distance-weighted interior
/// face values.
DiscreteField complete_faces(const AdmissibleMesh& mesh, Eigen::VectorXd cells);

/// March the scheme; couplings other than zero run a fixed-point iteration on
/// the initial state (L2 change below 1e-11, at most 500 sweeps, else
/// FixedPointStall).
SpaceTimeField solve_transient(const TransientProblemData& data);

/// Slab differences (u^(m) - u^(m-1))/k, one per slab.
std::vector<DiscreteField> time_derivative(const SpaceTimeField& u);

/// Separable exact solution tau(t) * s(x) whose shape s is a Laplacian
/// eigenfunction, so the continuous Riesz image of the time derivative is
/// riesz_factor * dtau(t) * s(x).
struct TransientExactBundle {
  ExactSolutionOracle spatial;
  std::function<double(double)> tau;
  std::function<double(double)> dtau;
  double riesz_factor = 0.0;
};

struct DeltaTimeBreakdown {
  double riesz_term = 0.0;  ///< dim * L2L2 gap of the lifted time derivative
  double grad_term = 0.0;   ///< dim * L2L2 gap of the normal gradients
  double max_term = 0.0;    ///< max over sampled times of the L2 gap
  double total = 0.0;
};

/// Space-time distance between the exact bundle and a discrete evolution;
/// the max term is sampled at slab endpoints plus 3 interior points per slab.
DeltaTimeBreakdown delta_time(const TransientExactBundle& exact,
                              const SpaceTimeField& u);

/// Per-slab conformity functionals of the defect field of the bundle's exact
/// solution (Riesz-lifted derivative + gradient + flux, here flux-free).
std::vector<FunctionalData> manufactured_conformity_slabs(
    const AdmissibleMesh& mesh, const TransientExactBundle& exact,
    const TimeGrid& grid);

/// Space-time dual norm via slab decoupling:
/// sqrt(sum_m k * dim * zeta_m^2); zeta_m the steady dual norm of slab m.
double zeta_time_slabs(const TpfaOperator& op0,
                       const std::vector<FunctionalData>& slabs,
                       const TimeGrid& grid);

struct EnergyMargins {
  double uniform = 0.0;    ///< bound minus max-in-time L2 norm
  double telescope = 0.0;  ///< pairing minus endpoint energy difference
  double terminal = 0.0;   ///< weighted squares minus final energy
};

/// Margins of the three unconditional energy inequalities; all must be
/// nonnegative up to roundoff for any space-time field.
EnergyMargins energy_checks(const SpaceTimeField& w);

/// Heat problem manufactured from exp(-t) sin(pi x1) sin(pi x2).
struct TransientSetup {
  TransientExactBundle bundle;
  TimeDependentData data;  ///< bound to the mesh given at creation
};

TransientSetup manufactured_heat(const AdmissibleMesh& mesh);

/// Cell means of the coupling datum consistent with the manufactured exact
/// solution under the given grid and coupling.
Eigen::VectorXd manufactured_heat_xi0(const AdmissibleMesh& mesh,
                                      const TimeGrid& grid, CouplingMap phi);

}  // namespace tpfa

#endif

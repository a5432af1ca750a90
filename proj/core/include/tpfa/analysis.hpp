#ifndef TPFA_ANALYSIS_HPP
#define TPFA_ANALYSIS_HPP

#include <iosfwd>
#include <vector>

#include "tpfa/assembly.hpp"
#include "tpfa/space.hpp"

namespace tpfa {

/// How the exact gradient is represented on cones: its cone mean (default) or
/// its pointwise normal component integrated by quadrature.
enum class GradientRepr { ConeMean, Pointwise };

/// Everything measured about one solve; one row of a study table.
struct ErrorReport {
  double h = 0.0;            ///< largest cell diameter
  double theta = 0.0;        ///< mesh regularity (min distance/diameter)
  double interp_l2 = 0.0;    ///< ||interpolant - u||_L2, both discrete
  double l2 = 0.0;           ///< ||exact - u||_L2
  double normal_grad = 0.0;  ///< ||mean normal gradient - normal differences||_L2
  double delta = 0.0;        ///< l2/diam + sqrt(dim) * normal_grad
  double interp_upper = 0.0; ///< same distance measured to the interpolant
  double conformity = 0.0;   ///< dual-norm conformity defect (0 under 1e-9)
  double cgrad = 0.0;        ///< ||consistent gradient - exact gradient||_L2
  double cgrad_bound = 0.0;  ///< (dim/theta)(normal_grad + theta_osc)
  double theta_osc = 0.0;    ///< oscillation of the exact gradient
};

/// `h,theta,l2,ngrad,delta,cgrad,zeta,interp_ub,theta_osc`
extern const char* const kErrorReportCsvHeader;
/// One CSV row at full round-trip precision.
std::string error_report_csv_row(const ErrorReport& r);

struct DeltaBreakdown {
  double l2 = 0.0;
  double cone = 0.0;
  double delta = 0.0;  ///< l2/diam + sqrt(dim)*cone
};

/// Distance between the oracle and a discrete field.
DeltaBreakdown delta_distance(const ExactSolutionOracle& exact,
                              const DiscreteField& u,
                              GradientRepr repr = GradientRepr::ConeMean);

/// Dual norm of the conformity functional of phi; values below 1e-9 are
/// reported as 0 (solver noise floor).
double conformity_error(const TpfaOperator& op, const HdivOracle& phi);
double conformity_error(const AdmissibleMesh& mesh, const HdivOracle& phi);

/// Oscillation of grad(exact): sqrt of sum_K (1/|K|) int int |g(y)-g(x)|^2.
double gradient_oscillation(const ExactSolutionOracle& exact,
                            const AdmissibleMesh& mesh);

struct CgradResult {
  double error = 0.0;
  double bound = 0.0;
};

/// Consistent-gradient error with its unconditional bound
/// (dim/theta)(normal_grad + theta_osc); throws BoundViolation if the bound
/// fails beyond numerical slack.
CgradResult consistent_gradient_error(const ExactSolutionOracle& exact,
                                      const DiscreteField& u, double normal_grad,
                                      double theta_osc);

struct SandwichResult {
  bool lower_ok = false;  ///< conformity <= delta + 1e-9
  bool upper_ok = false;  ///< delta <= 3 (conformity + interp_upper)
  double lower_margin = 0.0;
  double upper_margin = 0.0;
};

SandwichResult sandwich_check(const ErrorReport& r);

/// Solve the steady problem and measure every report entry.
ErrorReport full_report(const AdmissibleMesh& mesh,
                        const ExactSolutionOracle& exact, const SteadyData& data);

struct RateStudy {
  std::vector<ErrorReport> rows;
  std::vector<double> l2_order;     ///< between consecutive rows
  std::vector<double> cgrad_order;  ///< between consecutive rows
};

/// Per-level reports plus observed orders on a refining mesh sequence.
RateStudy h2_rate_study(const std::vector<const AdmissibleMesh*>& meshes,
                        const ExactSolutionOracle& exact, const SteadyData& data);

/// Observed order between two levels: log(e0/e1)/log(h0/h1).
double observed_order(double e0, double e1, double h0, double h1);

/// Minimizer over the discrete space of the quadratic surrogate
/// ||exact - v||^2/diam^2 + dim ||mean normal gradient - normal diffs||^2;
/// a computable stand-in for the interpolation infimum.
DiscreteField best_interpolant(const AdmissibleMesh& mesh,
                               const ExactSolutionOracle& exact);

}  // namespace tpfa

#endif

#ifndef TPFA_SINGULAR_HPP
#define TPFA_SINGULAR_HPP

#include <vector>

#include "tpfa/analysis.hpp"

namespace tpfa {

/// Exponent of the logarithmic singular solution.
inline constexpr double kSingularGamma = 0.25;
/// Half-width of the square domain centered at the singular point.
inline constexpr double kSingularRadius = 0.5;

/// Center of the unit square, the singular point.
Point singular_center();

/// Upper incomplete gamma Gamma(a, x) for a in (0, 3], x >= 0, to relative
/// 1e-12: power series below x = a + 1, continued fraction above.
double upper_incomplete_gamma(double a, double x);

/// u(x) = (-log max(|x1-1/2|, |x2-1/2|))^gamma - (log 2)^gamma.
/// Throws SingularPoint exactly at the center.
double singular_value(const Point& x);

/// Gradient of the active max branch; throws SingularPoint at the center and
/// DiagonalPoint where both branches tie.
Point singular_gradient(const Point& x);

struct NormPair {
  double grad = 0.0;
  double value = 0.0;
};

/// L2 norms of the gradient and of the value over the square of half-width r
/// around the center, for the solution vanishing on that square's boundary.
NormPair singular_exact_norms(double r);

/// Integral of the singular value along the segment [p, q], exact up to the
/// incomplete-gamma evaluations: the segment is split where the max branch
/// changes so the branch argument is affine on every piece.
double singular_segment_integral(const Point& p, const Point& q);

/// Mean of grad(u) . n over a cone, via the boundary reduction of the value.
double singular_cone_mean(const AdmissibleMesh& m, int cone);

/// Oracle with every closed-form override wired in.
ExactSolutionOracle singular_oracle();

/// Scheme data of the benchmark: f = 0 and F = -grad(u).
SteadyData singular_data();

/// Solve + full error report on each mesh of a refining family.
std::vector<ErrorReport> run_singular_benchmark(
    const std::vector<const AdmissibleMesh*>& meshes);

/// `h,e1,e2,e3,e4,e5`: discrete-interpolant gap, L2 error, cone-gradient
/// error, solution distance, interpolant distance.
extern const char* const kBenchCsvHeader;
std::string bench_csv_row(const ErrorReport& r);

}  // namespace tpfa

#endif

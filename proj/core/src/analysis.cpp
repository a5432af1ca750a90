#include "tpfa/analysis.hpp"

#include <cmath>
#include <sstream>

#include "tpfa/errors.hpp"
#include "tpfa/format.hpp"
#include "tpfa/parallel.hpp"

namespace tpfa {

const char* const kErrorReportCsvHeader =
    "h,theta,l2,ngrad,delta,cgrad,zeta,interp_ub,theta_osc";

std::string error_report_csv_row(const ErrorReport& r) {
  std::ostringstream os;
  os << format_full(r.h) << ',' << format_full(r.theta) << ','
     << format_full(r.l2) << ',' << format_full(r.normal_grad) << ','
     << format_full(r.delta) << ',' << format_full(r.cgrad) << ','
     << format_full(r.conformity) << ',' << format_full(r.interp_upper) << ','
     << format_full(r.theta_osc);
  return os.str();
}

namespace {

/// Cone term of the pointwise gradient representation: quadrature of
/// (grad(exact) . n - normal difference)^2 over each cone triangle.
double pointwise_cone_term(const ExactSolutionOracle& exact,
                           const DiscreteField& u) {
  if (!exact.gradient)
    throw OracleMissing("pointwise representation requires the exact gradient");
  const AdmissibleMesh& m = *u.mesh;
  double s = parallel_sum(m.n_cones(), [&](long c) {
    int ci = static_cast<int>(c);
    int f = m.cone_face(ci);
    const Point& a = m.vertex(m.face_vertices(f)[0]);
    const Point& b = m.vertex(m.face_vertices(f)[1]);
    const Point& xk = m.cell_point(m.cone_cell(ci));
    const Point n = m.cone_normal(ci);
    double g = u.jump(ci) / m.cone_distance(ci);
    return integrate_triangle(
        [&](const Point& x) {
          double e = exact.gradient(x).dot(n) - g;
          return e * e;
        },
        xk, a, b);
  });
  return std::sqrt(s);
}

}  // namespace

DeltaBreakdown delta_distance(const ExactSolutionOracle& exact,
                              const DiscreteField& u, GradientRepr repr) {
  const AdmissibleMesh& m = *u.mesh;
  DeltaBreakdown out;
  out.l2 = exact.l2_error(m, u.cell);
  if (repr == GradientRepr::ConeMean)
    out.cone = (exact.mean_normal_gradient(m) - normal_difference(u)).l2_norm();
  else
    out.cone = pointwise_cone_term(exact, u);
  out.delta = out.l2 / m.domain_diameter() +
              std::sqrt(static_cast<double>(m.dim())) * out.cone;
  return out;
}

double conformity_error(const TpfaOperator& op, const HdivOracle& phi) {
  double z = dual_norm(op, conformity_functional(*op.mesh, phi));
  return z < 1e-9 ? 0.0 : z;
}

double conformity_error(const AdmissibleMesh& mesh, const HdivOracle& phi) {
  return conformity_error(assemble_operator(mesh), phi);
}

double gradient_oscillation(const ExactSolutionOracle& exact,
                            const AdmissibleMesh& mesh) {
  double concentrated = parallel_sum(mesh.n_cells(), [&](long K) {
    int Ki = static_cast<int>(K);
    return exact.cell_gradient_integral(mesh, Ki).squaredNorm() /
           mesh.cell_measure(Ki);
  });
  double sq = 2.0 * (exact.grad_sq_norm(mesh) - concentrated);
  return std::sqrt(std::max(0.0, sq));
}

CgradResult consistent_gradient_error(const ExactSolutionOracle& exact,
                                      const DiscreteField& u, double normal_grad,
                                      double theta_osc) {
  const AdmissibleMesh& m = *u.mesh;
  std::vector<Point> g = consistent_gradient(u);
  double cross = 0.0;
  for (int K = 0; K < m.n_cells(); ++K)
    cross += m.cell_measure(K) * g[K].squaredNorm() -
             2.0 * g[K].dot(exact.cell_gradient_integral(m, K));
  CgradResult out;
  out.error = std::sqrt(std::max(0.0, cross + exact.grad_sq_norm(m)));
  out.bound = static_cast<double>(m.dim()) / m.quality().theta *
              (normal_grad + theta_osc);
  if (out.error > out.bound * (1.0 + 1e-9) + 1e-12)
    throw BoundViolation("consistent-gradient bound violated");
  return out;
}

SandwichResult sandwich_check(const ErrorReport& r) {
  SandwichResult s;
  s.lower_margin = r.delta + 1e-9 - r.conformity;
  s.lower_ok = s.lower_margin >= 0.0;
  s.upper_margin = 3.0 * (r.conformity + r.interp_upper) - r.delta;
  s.upper_ok = s.upper_margin >= 0.0;
  return s;
}

ErrorReport full_report(const AdmissibleMesh& mesh,
                        const ExactSolutionOracle& exact, const SteadyData& data) {
  ErrorReport r;
  MeshQuality q = mesh.quality();
  r.h = q.h;
  r.theta = q.theta;

  TpfaOperator op = assemble_operator(mesh);
  DiscreteField u = solve(op, steady_functional(mesh, data));

  ConeField gbar = exact.mean_normal_gradient(mesh);
  r.normal_grad = (gbar - normal_difference(u)).l2_norm();
  r.l2 = exact.l2_error(mesh, u.cell);
  double sqd = std::sqrt(static_cast<double>(mesh.dim()));
  r.delta = r.l2 / mesh.domain_diameter() + sqd * r.normal_grad;

  DiscreteField interp = canonical_interpolant(mesh, exact.value);
  r.interp_l2 = cell_l2_norm(mesh, interp.cell - u.cell);
  double interp_l2 = exact.l2_error(mesh, interp.cell);
  double interp_cone = (gbar - normal_difference(interp)).l2_norm();
  r.interp_upper = interp_l2 / mesh.domain_diameter() + sqd * interp_cone;

  r.conformity = conformity_error(op, scheme_conformity_data(exact, data));
  r.theta_osc = gradient_oscillation(exact, mesh);
  CgradResult cg = consistent_gradient_error(exact, u, r.normal_grad, r.theta_osc);
  r.cgrad = cg.error;
  r.cgrad_bound = cg.bound;
  return r;
}

double observed_order(double e0, double e1, double h0, double h1) {
  return std::log(e0 / e1) / std::log(h0 / h1);
}

RateStudy h2_rate_study(const std::vector<const AdmissibleMesh*>& meshes,
                        const ExactSolutionOracle& exact, const SteadyData& data) {
  RateStudy s;
  for (const AdmissibleMesh* m : meshes)
    s.rows.push_back(full_report(*m, exact, data));
  for (size_t i = 0; i + 1 < s.rows.size(); ++i) {
    const ErrorReport& a = s.rows[i];
    const ErrorReport& b = s.rows[i + 1];
    s.l2_order.push_back(observed_order(a.l2, b.l2, a.h, b.h));
    s.cgrad_order.push_back(observed_order(a.cgrad, b.cgrad, a.h, b.h));
  }
  return s;
}

DiscreteField best_interpolant(const AdmissibleMesh& mesh,
                               const ExactSolutionOracle& exact) {
  double diam2 = mesh.domain_diameter() * mesh.domain_diameter();
  TpfaOperator op = assemble_operator(mesh, 1.0 / diam2);
  FunctionalData l(mesh);
  parallel_chunks(mesh.n_cells(), [&](int, long begin, long end) {
    for (long K = begin; K < end; ++K)
      l.a[K] = exact.cell_integral(mesh, static_cast<int>(K)) / diam2;
  });
  parallel_chunks(mesh.n_cones(), [&](int, long begin, long end) {
    for (long c = begin; c < end; ++c)
      l.b[c] = mesh.face_measure(mesh.cone_face(static_cast<int>(c))) *
               exact.cone_normal_mean(mesh, static_cast<int>(c));
  });
  return solve(op, l);
}

}  // namespace tpfa

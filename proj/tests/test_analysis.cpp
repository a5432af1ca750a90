#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracle_utils.hpp"
#include "tpfa/analysis.hpp"
#include "tpfa/space.hpp"

using namespace tpfa;

namespace {

const double kPi = std::acos(-1.0);

Point sin_sin_grad(const Point& x) {
  return Point(kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y()),
               kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y()), 0.0);
}

/// Cone mean of grad(sin sin) . n by plain 2d quadrature over the cone.
double cone_mean_oracle(const AdmissibleMesh& mesh, int c) {
  int K = mesh.cone_cell(c);
  int f = mesh.cone_face(c);
  const Point& n = mesh.cone_normal(c);
  auto integrand = [&](const Point& x) { return sin_sin_grad(x).dot(n); };
  const auto& fv = mesh.face_vertices(f);
  double total = testutil::tensor_triangle(integrand, mesh.cell_point(K),
                                           mesh.vertex(fv[0]), mesh.vertex(fv[1]));
  return total / mesh.cone_measure(c);
}

}  // namespace

TEST_CASE("every entry of the error report is confirmed by independent quadrature") {
  AdmissibleMesh mesh = generate_acute_triangular_grid(2);
  ExactSolutionOracle oracle = make_sin_sin();
  SteadyData data = sin_sin_load();
  ErrorReport r = full_report(mesh, oracle, data);

  CHECK(r.h == doctest::Approx(mesh.quality().h).epsilon(1e-14));
  CHECK(r.theta == doctest::Approx(mesh.quality().theta).epsilon(1e-14));

  // recompute the solve once; all distances refer to it
  TpfaOperator op = assemble_operator(mesh);
  DiscreteField u = solve(op, steady_functional(mesh, data));

  double l2_sq = 0.0;
  for (int K = 0; K < mesh.n_cells(); ++K)
    l2_sq += testutil::tensor_cell(mesh, K, [&](const Point& x) {
      double d = std::sin(kPi * x.x()) * std::sin(kPi * x.y()) - u.cell[K];
      return d * d;
    });
  CHECK(r.l2 == doctest::Approx(std::sqrt(l2_sq)).epsilon(1e-6));

  ConeField diff = normal_difference(u);
  double ng_sq = 0.0;
  for (int c = 0; c < mesh.n_cones(); ++c) {
    double gap = cone_mean_oracle(mesh, c) - diff.val[c];
    ng_sq += mesh.cone_measure(c) * gap * gap;
  }
  CHECK(r.normal_grad == doctest::Approx(std::sqrt(ng_sq)).epsilon(1e-7));

  double diam = mesh.domain_diameter();
  CHECK(r.delta == doctest::Approx(std::sqrt(l2_sq) / diam +
                                   std::sqrt(2.0) * std::sqrt(ng_sq))
                       .epsilon(1e-7));

  DiscreteField interp = canonical_interpolant(mesh, oracle.value);
  CHECK(r.interp_l2 ==
        doctest::Approx(cell_l2_norm(mesh, interp.cell - u.cell)).epsilon(1e-10));
  DeltaBreakdown ib = delta_distance(oracle, interp);
  CHECK(r.interp_upper == doctest::Approx(ib.delta).epsilon(1e-10));

  // conformity defect against a dense solve of the full dual problem
  FunctionalData conf =
      conformity_functional(mesh, scheme_conformity_data(oracle, data));
  CHECK(r.conformity ==
        doctest::Approx(testutil::dense_dual_norm(conf)).epsilon(1e-7));

  // oscillation of the gradient from per-cell tensor integrals
  double osc_sq = 0.0;
  for (int K = 0; K < mesh.n_cells(); ++K) {
    double norm_sq = testutil::tensor_cell(mesh, K, [&](const Point& x) {
      return sin_sin_grad(x).squaredNorm();
    });
    double ix = testutil::tensor_cell(
        mesh, K, [&](const Point& x) { return sin_sin_grad(x).x(); });
    double iy = testutil::tensor_cell(
        mesh, K, [&](const Point& x) { return sin_sin_grad(x).y(); });
    osc_sq += 2.0 * (norm_sq - (ix * ix + iy * iy) / mesh.cell_measure(K));
  }
  CHECK(r.theta_osc == doctest::Approx(std::sqrt(osc_sq)).epsilon(1e-7));

  // reconstructed-gradient error straight from its definition
  std::vector<Point> ghat = consistent_gradient(u);
  double cg_sq = 0.0;
  for (int K = 0; K < mesh.n_cells(); ++K)
    cg_sq += testutil::tensor_cell(mesh, K, [&](const Point& x) {
      return (ghat[K] - sin_sin_grad(x)).squaredNorm();
    });
  CHECK(r.cgrad == doctest::Approx(std::sqrt(cg_sq)).epsilon(1e-7));
  CHECK(r.cgrad_bound ==
        doctest::Approx(2.0 / r.theta * (r.normal_grad + r.theta_osc))
            .epsilon(1e-10));
  CHECK(r.cgrad <= r.cgrad_bound);
}

TEST_CASE("the delta breakdown satisfies its own algebra") {
  AdmissibleMesh mesh = generate_square_grid(4);
  ExactSolutionOracle oracle = make_sin_sin();
  DiscreteField u = solve(assemble_operator(mesh),
                          steady_functional(mesh, sin_sin_load()));
  DeltaBreakdown db = delta_distance(oracle, u);
  CHECK(db.delta == doctest::Approx(db.l2 / mesh.domain_diameter() +
                                    std::sqrt(2.0) * db.cone)
                        .epsilon(1e-12));
  DeltaBreakdown pw = delta_distance(oracle, u, GradientRepr::Pointwise);
  CHECK(pw.delta > 0.0);
  // both gradient representations measure the same object
  CHECK(pw.delta == doctest::Approx(db.delta).epsilon(0.5));

  ExactSolutionOracle no_grad;
  no_grad.value = oracle.value;
  CHECK_THROWS_AS(delta_distance(no_grad, u, GradientRepr::Pointwise),
                  OracleMissing);
}

TEST_CASE("gradient oscillation of a linear field has the closed-form value") {
  RawMesh raw;
  raw.vertices = {Point(0, 0, 0), Point(1, 0, 0), Point(1, 1, 0),
                  Point(0, 1, 0)};
  raw.cell_vertices = {{0, 1, 2, 3}};
  raw.cell_points = {Point(0.5, 0.5, 0)};
  AdmissibleMesh cell = build_mesh(raw);
  ExactSolutionOracle linear;
  linear.value = [](const Point& x) { return 0.5 * x.x() * x.x(); };
  linear.gradient = [](const Point& x) { return Point(x.x(), 0.0, 0.0); };
  double osc = gradient_oscillation(linear, cell);
  // 2 (int x^2 - (int x)^2 / |K|) = 2 (1/3 - 1/4) = 1/6
  CHECK(osc * osc == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("exactly conforming data reports zero conformity defect") {
  AdmissibleMesh mesh = generate_acute_triangular_grid(2);
  Point g(1.2, -0.3, 0);
  ExactSolutionOracle affine = make_affine(g, 0.1);
  SteadyData data;
  data.flux_mean = [g](const AdmissibleMesh& m, int c) {
    return -g.dot(m.cone_normal(c));
  };
  double zeta = conformity_error(mesh, scheme_conformity_data(affine, data));
  CHECK(zeta == 0.0);  // grad(u) + F = 0: defect under the reporting floor
}

TEST_CASE("the sandwich between conformity, distance and interpolation holds") {
  ExactSolutionOracle oracle = make_sin_sin();
  SteadyData data = sin_sin_load();
  for (int n : {4, 8}) {
    AdmissibleMesh mesh = generate_square_grid(n);
    ErrorReport r = full_report(mesh, oracle, data);
    SandwichResult s = sandwich_check(r);
    CHECK(s.lower_ok);
    CHECK(s.upper_ok);
    CHECK(s.lower_margin >= -1e-9);
    CHECK(s.upper_margin >= 0.0);
  }
}

TEST_CASE("the quadratic surrogate interpolant is at least as good as sampling") {
  AdmissibleMesh mesh = generate_square_grid(8);
  ExactSolutionOracle oracle = make_sin_sin();
  DiscreteField best = best_interpolant(mesh, oracle);
  DiscreteField sampled = canonical_interpolant(mesh, oracle.value);
  DeltaBreakdown db_best = delta_distance(oracle, best);
  DeltaBreakdown db_sampled = delta_distance(oracle, sampled);
  double diam = mesh.domain_diameter();
  auto surrogate = [&](const DeltaBreakdown& db) {
    return db.l2 * db.l2 / (diam * diam) + 2.0 * db.cone * db.cone;
  };
  CHECK(surrogate(db_best) <= surrogate(db_sampled) * (1.0 + 1e-10));
  // the summed form can differ from the quadratic optimum by at most sqrt(2)
  CHECK(db_best.delta <= std::sqrt(2.0) * db_sampled.delta * (1.0 + 1e-10));
}

TEST_CASE("errors and conformity decay under refinement of the smooth problem") {
  ExactSolutionOracle oracle = make_sin_sin();
  SteadyData data = sin_sin_load();
  AdmissibleMesh coarse = generate_square_grid(8);
  AdmissibleMesh fine = generate_square_grid(16);
  RateStudy study = h2_rate_study({&coarse, &fine}, oracle, data);
  REQUIRE(study.rows.size() == 2);
  REQUIRE(study.l2_order.size() == 1);
  CHECK(study.l2_order[0] > 0.9);
  CHECK(study.cgrad_order[0] > 0.9);
  CHECK(study.rows[1].conformity < study.rows[0].conformity);
  CHECK(study.rows[1].theta_osc < study.rows[0].theta_osc);
  // H2-type bound on the oscillation with 1% slack (d = 2)
  double h2_norm = std::sqrt(0.25 + kPi * kPi / 2.0 + std::pow(kPi, 4.0));
  for (const ErrorReport& r : study.rows)
    CHECK(r.theta_osc <= r.h / r.theta * h2_norm * 1.01);
}

TEST_CASE("observed order recovers the slope of a power law") {
  CHECK(observed_order(4.0, 1.0, 0.2, 0.1) == doctest::Approx(2.0));
  CHECK(observed_order(2.0, 1.0, 0.2, 0.1) == doctest::Approx(1.0));
}

TEST_CASE("csv rows start with the mesh size at full precision") {
  ErrorReport r;
  r.h = 1.0 / 3.0;
  r.l2 = 0.125;
  std::string row = error_report_csv_row(r);
  CHECK(row.rfind("0.3333333333333333,", 0) == 0);
  CHECK(std::string(kErrorReportCsvHeader) ==
        "h,theta,l2,ngrad,delta,cgrad,zeta,interp_ub,theta_osc");
}

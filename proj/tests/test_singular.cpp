#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracle_utils.hpp"
#include "tpfa/format.hpp"
#include "tpfa/singular.hpp"
#include "tpfa/space.hpp"

using namespace tpfa;

TEST_CASE("upper incomplete gamma reproduces frozen and closed-form values") {
  CHECK(upper_incomplete_gamma(1.25, 0.0) ==
        doctest::Approx(0.90640247705547708).epsilon(1e-13));
  CHECK(upper_incomplete_gamma(1.25, 2.5) ==
        doctest::Approx(0.11156778578998932).epsilon(1e-12));
  CHECK(upper_incomplete_gamma(0.5, 0.3) ==
        doctest::Approx(0.77735931124980804).epsilon(1e-12));
  CHECK(upper_incomplete_gamma(3.0, 7.0) ==
        doctest::Approx(0.059272327761043554).epsilon(1e-12));

  // a = 1, 2, 3 have elementary antiderivatives
  for (double x : {0.1, 1.0, 4.0, 20.0}) {
    CHECK(upper_incomplete_gamma(1.0, x) ==
          doctest::Approx(std::exp(-x)).epsilon(1e-12));
    CHECK(upper_incomplete_gamma(2.0, x) ==
          doctest::Approx((x + 1.0) * std::exp(-x)).epsilon(1e-12));
    CHECK(upper_incomplete_gamma(3.0, x) ==
          doctest::Approx((x * x + 2.0 * x + 2.0) * std::exp(-x)).epsilon(1e-12));
  }
  // a = 1/2 reduces to the complementary error function
  for (double x : {0.2, 1.7}) {
    CHECK(upper_incomplete_gamma(0.5, x) ==
          doctest::Approx(std::sqrt(std::acos(-1.0)) * std::erfc(std::sqrt(x)))
              .epsilon(1e-12));
  }
}

TEST_CASE("incomplete gamma agrees with direct quadrature of the definition") {
  for (double a : {0.25, 0.6, 1.25, 2.5}) {
    for (double x : {0.0, 0.05, 0.9, 3.0, 11.0}) {
      CHECK(upper_incomplete_gamma(a, x) ==
            doctest::Approx(testutil::gamma_upper_oracle(a, x)).epsilon(1e-9));
    }
  }
  // recurrence Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x}
  for (double x : {0.4, 2.0, 9.0}) {
    double a = 0.75;
    CHECK(upper_incomplete_gamma(a + 1.0, x) ==
          doctest::Approx(a * upper_incomplete_gamma(a, x) +
                          std::pow(x, a) * std::exp(-x))
              .epsilon(1e-12));
  }
}

TEST_CASE("incomplete gamma rejects or closes out boundary arguments") {
  CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(upper_incomplete_gamma(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(upper_incomplete_gamma(0.5, -0.1), DomainError);
  CHECK(upper_incomplete_gamma(2.0, std::numeric_limits<double>::infinity()) ==
        0.0);
  CHECK(upper_incomplete_gamma(1.5, 0.0) ==
        doctest::Approx(std::tgamma(1.5)).epsilon(1e-14));
}

TEST_CASE("the singular solution has its frozen point value and boundary zero") {
  CHECK(singular_value(Point(0.75, 0.5, 0)) ==
        doctest::Approx(0.17264095469805667).epsilon(1e-13));
  CHECK(singular_value(Point(1.0, 0.3, 0)) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(singular_value(Point(0.62, 0.0, 0)) ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK_THROWS_AS(singular_value(singular_center()), SingularPoint);
}

TEST_CASE("the gradient matches finite differences away from the branch lines") {
  for (const Point& x : {Point(0.75, 0.5, 0), Point(0.3, 0.41, 0),
                         Point(0.52, 0.9, 0), Point(0.1, 0.62, 0)}) {
    Point g = singular_gradient(x);
    Point fd = testutil::fd_gradient(singular_value, x);
    CHECK((g - fd).norm() < 1e-5 * g.norm());
  }
  // only the active branch carries a derivative
  CHECK(singular_gradient(Point(0.75, 0.5, 0)).y() == 0.0);
  CHECK(singular_gradient(Point(0.5, 0.2, 0)).x() == 0.0);
  CHECK_THROWS_AS(singular_gradient(Point(0.7, 0.7, 0)), DiagonalPoint);
  CHECK_THROWS_AS(singular_gradient(Point(0.75, 0.25, 0)), DiagonalPoint);
  CHECK_THROWS_AS(singular_gradient(singular_center()), SingularPoint);
}

TEST_CASE("exact norms carry the frozen benchmark values") {
  NormPair full = singular_exact_norms(0.5);
  CHECK(full.grad == doctest::Approx(1.0959573024467923).epsilon(1e-12));
  CHECK(full.value == doctest::Approx(0.15199258746498079).epsilon(1e-12));

  NormPair small = singular_exact_norms(std::exp(-10.0));
  CHECK(small.grad == doctest::Approx(0.56234132519034908).epsilon(1e-12));
  CHECK(small.value == doctest::Approx(2.7109484488398634e-6).epsilon(1e-12));

  CHECK_THROWS_AS(singular_exact_norms(0.0), DomainError);
  CHECK_THROWS_AS(singular_exact_norms(0.51), DomainError);
}

TEST_CASE("exact norms agree with an independent radial quadrature") {
  for (double r : {0.5, 0.2, std::exp(-10.0)}) {
    NormPair np = singular_exact_norms(r);
    CHECK(np.grad * np.grad ==
          doctest::Approx(testutil::singular_grad_sq_oracle(r)).epsilon(1e-4));
    CHECK(np.value * np.value ==
          doctest::Approx(testutil::singular_val_sq_oracle(r)).epsilon(1e-4));
  }
}

TEST_CASE("segment integrals split at branch crossings and match adaptive quadrature") {
  // no crossing
  Point p1(0.62, 0.55, 0), q1(0.78, 0.71, 0);
  CHECK(singular_segment_integral(p1, q1) ==
        doctest::Approx(integrate_segment(singular_value, p1, q1)).epsilon(1e-9));
  // crosses the branch tie line inside the segment
  Point p2(0.62, 0.51, 0), q2(0.66, 0.71, 0);
  CHECK(singular_segment_integral(p2, q2) ==
        doctest::Approx(integrate_segment(singular_value, p2, q2)).epsilon(1e-9));
  // along a mesh edge touching the outer boundary
  Point p3(1.0, 0.25, 0), q3(0.75, 0.25, 0);
  CHECK(singular_segment_integral(p3, q3) ==
        doctest::Approx(integrate_segment(singular_value, p3, q3)).epsilon(1e-9));
}

TEST_CASE("cone means and cell gradient integrals match 2d quadrature off the diagonals") {
  AdmissibleMesh mesh = generate_acute_triangular_grid(2);
  ExactSolutionOracle oracle = singular_oracle();
  int checked = 0;
  for (int c = 0; c < mesh.n_cones() && checked < 6; ++c) {
    int K = mesh.cone_cell(c);
    const auto& fv = mesh.face_vertices(mesh.cone_face(c));
    Point pts[3] = {mesh.cell_point(K), mesh.vertex(fv[0]), mesh.vertex(fv[1])};
    bool right_wedge = true;
    for (const Point& pt : pts)
      if (!(pt.x() - 0.5 > std::abs(pt.y() - 0.5) + 0.02)) right_wedge = false;
    if (!right_wedge) continue;
    ++checked;
    const Point& n = mesh.cone_normal(c);
    double oracle2d =
        testutil::tensor_triangle(
            [&](const Point& x) { return singular_gradient(x).dot(n); }, pts[0],
            pts[1], pts[2]) /
        mesh.cone_measure(c);
    CHECK(singular_cone_mean(mesh, c) == doctest::Approx(oracle2d).epsilon(1e-8));
    CHECK(oracle.cone_normal_mean(mesh, c) ==
          doctest::Approx(oracle2d).epsilon(1e-8));
  }
  CHECK(checked == 6);

  // gradient integrals over all cells cancel by symmetry
  Point total = Point::Zero();
  for (int K = 0; K < mesh.n_cells(); ++K)
    total += oracle.cell_gradient_integral(mesh, K);
  CHECK(total.norm() < 1e-10);

  CHECK(oracle.grad_sq_norm(mesh) ==
        doctest::Approx(1.0959573024467923 * 1.0959573024467923).epsilon(1e-12));
}

TEST_CASE("the benchmark data makes the scheme's conformity defect vanish") {
  AdmissibleMesh mesh = generate_acute_triangular_grid(2);
  ExactSolutionOracle oracle = singular_oracle();
  SteadyData data = singular_data();
  HdivOracle v = scheme_conformity_data(oracle, data);
  for (int c : {0, 10, 100}) CHECK(v.normal_mean(mesh, c) == doctest::Approx(0.0));
  CHECK(conformity_error(mesh, v) == 0.0);
}

TEST_CASE("the benchmark error table behaves like the published study") {
  AdmissibleMesh coarse = generate_acute_triangular_grid(2);
  AdmissibleMesh fine = generate_acute_triangular_grid(4);
  std::vector<ErrorReport> rows = run_singular_benchmark({&coarse, &fine});
  REQUIRE(rows.size() == 2);
  for (const ErrorReport& r : rows) {
    CHECK(r.conformity <= 1e-8);
    CHECK(r.delta <= 3.0 * (r.conformity + r.interp_upper));
    CHECK(r.conformity <= r.delta + 1e-9);
  }
  CHECK(rows[1].delta < rows[0].delta);
  CHECK(rows[1].l2 < rows[0].l2);

  std::string row = bench_csv_row(rows[0]);
  // columns: h, interpolant gap, l2, cone gradient, delta, interpolant delta
  CHECK(row.rfind(format_full(rows[0].h) + ",", 0) == 0);
  CHECK(rows[0].h == doctest::Approx(19.0 * std::sqrt(2.0) / 100.0).epsilon(1e-13));
  CHECK(std::string(kBenchCsvHeader) == "h,e1,e2,e3,e4,e5");
}

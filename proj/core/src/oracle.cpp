#include "tpfa/oracle.hpp"

#include <cmath>

#include "tpfa/errors.hpp"
#include "tpfa/parallel.hpp"

namespace tpfa {

namespace {

/// Outer normal of edge (p, q) of a planar triangle whose third vertex is r.
Point edge_normal(const Point& p, const Point& q, const Point& r) {
  Point t = q - p;
  Point nu(t.y(), -t.x(), 0.0);
  nu.normalize();
  if (nu.dot(0.5 * (p + q) - r) < 0.0) nu = -nu;
  return nu;
}

}  // namespace

double ExactSolutionOracle::cell_integral(const AdmissibleMesh& m, int K) const {
  const Point* sp = special ? &*special : nullptr;
  return integrate_cell(m, K, value, sp, refine_levels);
}

double ExactSolutionOracle::cone_normal_mean(const AdmissibleMesh& m,
                                             int cone) const {
  if (cone_mean_override) return cone_mean_override(m, cone);
  int f = m.cone_face(cone);
  const Point& a = m.vertex(m.face_vertices(f)[0]);
  const Point& b = m.vertex(m.face_vertices(f)[1]);
  const Point& xk = m.cell_point(m.cone_cell(cone));
  const Point& n = m.cone_normal(cone);
  double s = integrate_segment(value, a, b) * edge_normal(a, b, xk).dot(n) +
             integrate_segment(value, xk, a) * edge_normal(xk, a, b).dot(n) +
             integrate_segment(value, b, xk) * edge_normal(b, xk, a).dot(n);
  return s / m.cone_measure(cone);
}

ConeField ExactSolutionOracle::mean_normal_gradient(const AdmissibleMesh& m) const {
  ConeField g(m);
  parallel_chunks(m.n_cones(), [&](int, int begin, int end) {
    for (int c = begin; c < end; ++c) g.val[c] = cone_normal_mean(m, c);
  });
  return g;
}

Point ExactSolutionOracle::cell_gradient_integral(const AdmissibleMesh& m,
                                                  int K) const {
  if (cell_gradient_integral_override) return cell_gradient_integral_override(m, K);
  Point g = Point::Zero();
  for (int c = m.cone_begin(K); c < m.cone_end(K); ++c) {
    int f = m.cone_face(c);
    const Point& a = m.vertex(m.face_vertices(f)[0]);
    const Point& b = m.vertex(m.face_vertices(f)[1]);
    g += integrate_segment(value, a, b) * m.cone_normal(c);
  }
  return g;
}

double ExactSolutionOracle::grad_sq_norm(const AdmissibleMesh& m) const {
  if (grad_sq_override) return grad_sq_override(m);
  if (!gradient)
    throw OracleMissing("gradient required to evaluate its global norm");
  const Point* sp = special ? &*special : nullptr;
  return parallel_sum(m.n_cells(), [&](int K) {
    return integrate_cell(
        m, K, [&](const Point& x) { return gradient(x).squaredNorm(); }, sp,
        refine_levels);
  });
}

double ExactSolutionOracle::l2_error(const AdmissibleMesh& m,
                                     const Eigen::VectorXd& cells) const {
  if (cells.size() != m.n_cells())
    throw DataMisalignment("cell vector length does not match mesh");
  const Point* sp = special ? &*special : nullptr;
  double s = parallel_sum(m.n_cells(), [&](int K) {
    double uk = cells[K];
    return integrate_cell(
        m, K,
        [&](const Point& x) {
          double e = value(x) - uk;
          return e * e;
        },
        sp, refine_levels);
  });
  return std::sqrt(s);
}

HdivOracle scheme_conformity_data(const ExactSolutionOracle& exact,
                                  const SteadyData& data) {
  HdivOracle h;
  h.normal_mean = [&exact, flux = data.flux_mean](const AdmissibleMesh& m, int c) {
    double v = exact.cone_normal_mean(m, c);
    if (flux) v += flux(m, c);
    return v;
  };
  h.div_integral = [load = data.load_integral](const AdmissibleMesh& m, int K) {
    return load ? -load(m, K) : 0.0;
  };
  return h;
}

ExactSolutionOracle make_affine(const Point& g, double c) {
  ExactSolutionOracle o;
  o.value = [g, c](const Point& x) { return g.dot(x) + c; };
  o.gradient = [g](const Point&) { return g; };
  o.cone_mean_override = [g](const AdmissibleMesh& m, int cone) {
    return g.dot(m.cone_normal(cone));
  };
  o.grad_sq_override = [g](const AdmissibleMesh& m) {
    return g.squaredNorm() * m.domain_measure();
  };
  return o;
}

ExactSolutionOracle make_sin_sin() {
  const double pi = std::acos(-1.0);
  ExactSolutionOracle o;
  o.value = [pi](const Point& x) {
    return std::sin(pi * x.x()) * std::sin(pi * x.y());
  };
  o.gradient = [pi](const Point& x) {
    return Point(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                 pi * std::sin(pi * x.x()) * std::cos(pi * x.y()), 0.0);
  };
  o.grad_sq_override = [pi](const AdmissibleMesh&) { return pi * pi / 2.0; };
  return o;
}

SteadyData sin_sin_load() {
  const double pi = std::acos(-1.0);
  SteadyData d;
  d.load_integral = [pi](const AdmissibleMesh& m, int K) {
    return integrate_cell(m, K, [pi](const Point& x) {
      return 2.0 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y());
    });
  };
  return d;
}

}  // namespace tpfa

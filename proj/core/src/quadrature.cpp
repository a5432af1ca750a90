#include "tpfa/quadrature.hpp"

#include "tpfa/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tpfa {

namespace {

struct RulePoint {
  double l0, l1, l2, w;
};

/// Radon's 7-point rule, exact through degree 5
const std::array<RulePoint, 7> kDeg5 = [] {
  const double s = std::sqrt(15.0);
  const double a = (6.0 + s) / 21.0, wa = (155.0 + s) / 1200.0;
  const double b = (6.0 - s) / 21.0, wb = (155.0 - s) / 1200.0;
  return std::array<RulePoint, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40},
                                   {1 - 2 * a, a, a, wa},
                                   {a, 1 - 2 * a, a, wa},
                                   {a, a, 1 - 2 * a, wa},
                                   {1 - 2 * b, b, b, wb},
                                   {b, 1 - 2 * b, b, wb},
                                   {b, b, 1 - 2 * b, wb}}};
}();

double triangle_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double simpson(const Point& p, const Point& q, double fp, double fm, double fq) {
  return (p - q).norm() * (fp + 4.0 * fm + fq) / 6.0;
}

double adaptive_segment(const ScalarField& f, const Point& p, const Point& q,
                        double fp, double fm, double fq, double whole, double tol,
                        int depth) {
  if (depth <= 0) throw QuadratureFailure("segment quadrature depth exhausted");
  Point m = 0.5 * (p + q);
  Point lm = 0.5 * (p + m), rm = 0.5 * (m + q);
  double flm = f(lm), frm = f(rm);
  double left = simpson(p, m, fp, flm, fm);
  double right = simpson(m, q, fm, frm, fq);
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_segment(f, p, m, fp, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_segment(f, m, q, fm, frm, fq, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_triangle(const ScalarField& f, const Point& a, const Point& b,
                          const Point& c) {
  double area = triangle_area(a, b, c);
  double s = 0.0;
  for (const auto& rp : kDeg5)
    s += rp.w * f(rp.l0 * a + rp.l1 * b + rp.l2 * c);
  return area * s;
}

double integrate_triangle_toward_vertex(const ScalarField& f, const Point& a,
                                        const Point& b, const Point& c, int levels) {
  double total = 0.0;
  Point bb = b, cc = c;
  for (int l = 0; l < levels; ++l) {
    Point mb = 0.5 * (a + bb), mc = 0.5 * (a + cc);
    total += integrate_triangle(f, mb, bb, cc) + integrate_triangle(f, mb, cc, mc);
    bb = mb;
    cc = mc;
  }
  return total + integrate_triangle(f, a, bb, cc);
}

double integrate_segment(const ScalarField& f, const Point& p, const Point& q,
                         double rel_tol, int max_depth) {
  if ((q - p).norm() == 0.0) return 0.0;
  double fp = f(p), fq = f(q), fm = f(0.5 * (p + q));
  double whole = simpson(p, q, fp, fm, fq);
  double scale = std::max({std::abs(whole), (q - p).norm() * std::abs(fm), 1e-300});
  return adaptive_segment(f, p, q, fp, fm, fq, whole, rel_tol * scale, max_depth);
}

double integrate_cell(const AdmissibleMesh& mesh, int K, const ScalarField& f,
                      const Point* special, int levels) {
  if (mesh.dim() != 2)
    throw DomainError("cell quadrature implemented for planar meshes only");
  const Point& xk = mesh.cell_point(K);
  bool refine = false;
  if (special) {
    // refine when the special point belongs to the closed cell
    refine = true;
    double margin = 1e-12 * mesh.cell_diameter(K);
    for (int c = mesh.cone_begin(K); c < mesh.cone_end(K); ++c) {
      int fidx = mesh.cone_face(c);
      if ((*special - mesh.face_centroid(fidx)).dot(mesh.cone_normal(c)) > margin) {
        refine = false;
        break;
      }
    }
  }
  double total = 0.0;
  for (int c = mesh.cone_begin(K); c < mesh.cone_end(K); ++c) {
    int fidx = mesh.cone_face(c);
    const Point& a = mesh.vertex(mesh.face_vertices(fidx)[0]);
    const Point& b = mesh.vertex(mesh.face_vertices(fidx)[1]);
    if (!refine) {
      total += integrate_triangle(f, xk, a, b);
      continue;
    }
    // put the vertex nearest the special point first and refine toward it
    const Point* v[3] = {&xk, &a, &b};
    int nearest = 0;
    for (int i = 1; i < 3; ++i)
      if ((*v[i] - *special).norm() < (*v[nearest] - *special).norm()) nearest = i;
    std::swap(v[0], v[nearest]);
    total += integrate_triangle_toward_vertex(f, *v[0], *v[1], *v[2], levels);
  }
  return total;
}

}  // namespace tpfa

#include "tpfa/space.hpp"

#include <cmath>
#include <ostream>

#include "tpfa/errors.hpp"
#include "tpfa/format.hpp"

namespace tpfa {

DiscreteField::DiscreteField(const AdmissibleMesh& m)
    : mesh(&m),
      cell(Eigen::VectorXd::Zero(m.n_cells())),
      face(Eigen::VectorXd::Zero(m.n_interior_faces())) {}

double DiscreteField::face_value(int f) const {
  int i = mesh->interior_index(f);
  return i < 0 ? 0.0 : face[i];
}

double DiscreteField::jump(int c) const {
  return face_value(mesh->cone_face(c)) - cell[mesh->cone_cell(c)];
}

namespace {
void check_same_mesh(const AdmissibleMesh* a, const AdmissibleMesh* b) {
  if (a == nullptr || a != b)
    throw DataMisalignment("fields attached to different meshes");
}
}  // namespace

DiscreteField& DiscreteField::operator+=(const DiscreteField& o) {
  check_same_mesh(mesh, o.mesh);
  cell += o.cell;
  face += o.face;
  return *this;
}

DiscreteField& DiscreteField::operator-=(const DiscreteField& o) {
  check_same_mesh(mesh, o.mesh);
  cell -= o.cell;
  face -= o.face;
  return *this;
}

DiscreteField& DiscreteField::operator*=(double s) {
  cell *= s;
  face *= s;
  return *this;
}

DiscreteField operator+(DiscreteField a, const DiscreteField& b) { return a += b; }
DiscreteField operator-(DiscreteField a, const DiscreteField& b) { return a -= b; }
DiscreteField operator*(double s, DiscreteField a) { return a *= s; }

ConeField::ConeField(const AdmissibleMesh& m)
    : mesh(&m), val(Eigen::VectorXd::Zero(m.n_cones())) {}

double ConeField::l2_norm() const {
  double s = 0.0;
  for (int c = 0; c < mesh->n_cones(); ++c)
    s += mesh->cone_measure(c) * val[c] * val[c];
  return std::sqrt(s);
}

ConeField operator-(ConeField a, const ConeField& b) {
  check_same_mesh(a.mesh, b.mesh);
  a.val -= b.val;
  return a;
}

double cell_l2_norm(const AdmissibleMesh& m, const Eigen::VectorXd& cells) {
  if (cells.size() != m.n_cells())
    throw DataMisalignment("cell vector length does not match mesh");
  double s = 0.0;
  for (int K = 0; K < m.n_cells(); ++K)
    s += m.cell_measure(K) * cells[K] * cells[K];
  return std::sqrt(s);
}

void write_field_csv(std::ostream& os, const DiscreteField& u) {
  for (int K = 0; K < u.mesh->n_cells(); ++K)
    os << "cell," << K << ',' << format_full(u.cell[K]) << '\n';
  for (int i = 0; i < u.mesh->n_interior_faces(); ++i)
    os << "face," << u.mesh->interior_face(i) << ',' << format_full(u.face[i])
       << '\n';
}

ConeField normal_difference(const DiscreteField& u) {
  ConeField g(*u.mesh);
  for (int c = 0; c < u.mesh->n_cones(); ++c)
    g.val[c] = u.jump(c) / u.mesh->cone_distance(c);
  return g;
}

double discrete_norm(const DiscreteField& u) {
  return std::sqrt(static_cast<double>(u.mesh->dim())) *
         normal_difference(u).l2_norm();
}

double discrete_inner(const DiscreteField& w, const DiscreteField& v) {
  check_same_mesh(w.mesh, v.mesh);
  const AdmissibleMesh& m = *w.mesh;
  double s = 0.0;
  for (int c = 0; c < m.n_cones(); ++c)
    s += m.face_measure(m.cone_face(c)) / m.cone_distance(c) * w.jump(c) *
         v.jump(c);
  return s;
}

namespace {

/// Samples phi, converting "undefined exactly here" domain errors into the
/// interpolation-level error so callers know which point was hit.
double sample(const ScalarField& phi, const Point& x) {
  try {
    return phi(x);
  } catch (const DomainError& e) {
    throw UndefinedValue("interpolation point (" + format_full(x.x()) + ", " +
                         format_full(x.y()) + ") is undefined: " + e.what());
  }
}

}  // namespace

DiscreteField canonical_interpolant(const AdmissibleMesh& mesh,
                                    const ScalarField& phi, FaceRule rule) {
  DiscreteField v(mesh);
  for (int K = 0; K < mesh.n_cells(); ++K)
    v.cell[K] = sample(phi, mesh.cell_point(K));
  for (int i = 0; i < mesh.n_interior_faces(); ++i) {
    int f = mesh.interior_face(i);
    auto [c0, c1] = mesh.face_cones(f);
    int K = mesh.cone_cell(c0), L = mesh.cone_cell(c1);
    double dK = mesh.cone_distance(c0), dL = mesh.cone_distance(c1);
    if (rule == FaceRule::Point) {
      Point x = mesh.cell_point(K) +
                dK / (dK + dL) * (mesh.cell_point(L) - mesh.cell_point(K));
      v.face[i] = sample(phi, x);
    } else {
      v.face[i] = (dL * v.cell[K] + dK * v.cell[L]) / (dK + dL);
    }
  }
  return v;
}

std::vector<Point> consistent_gradient(const DiscreteField& u, bool factor_dim) {
  const AdmissibleMesh& m = *u.mesh;
  double scale = factor_dim ? static_cast<double>(m.dim()) : 1.0;
  std::vector<Point> g(m.n_cells(), Point::Zero());
  for (int K = 0; K < m.n_cells(); ++K) {
    for (int c = m.cone_begin(K); c < m.cone_end(K); ++c) {
      int f = m.cone_face(c);
      g[K] += m.face_measure(f) * (m.face_centroid(f) - m.cell_point(K)) *
              (u.jump(c) / m.cone_distance(c));
    }
    g[K] *= scale / m.cell_measure(K);
  }
  return g;
}

}  // namespace tpfa

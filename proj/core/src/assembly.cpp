#include "tpfa/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>

#include "tpfa/errors.hpp"
#include "tpfa/parallel.hpp"

namespace tpfa {

TpfaOperator assemble_operator(const AdmissibleMesh& mesh, double mass_scale) {
  TpfaOperator op;
  op.mesh = &mesh;
  op.mass_scale = mass_scale;
  int n = mesh.n_cells(), ni = mesh.n_interior_faces();
  op.face_c0.resize(ni);
  op.face_c1.resize(ni);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * ni + n);
  for (int i = 0; i < ni; ++i) {
    int f = mesh.interior_face(i);
    auto [c0, c1] = mesh.face_cones(f);
    int K = mesh.cone_cell(c0), L = mesh.cone_cell(c1);
    double dK = mesh.cone_distance(c0), dL = mesh.cone_distance(c1);
    double tau = mesh.face_measure(f) / (dK + dL);
    trip.emplace_back(K, K, tau);
    trip.emplace_back(L, L, tau);
    trip.emplace_back(K, L, -tau);
    trip.emplace_back(L, K, -tau);
    op.face_c0[i] = dL / (dK + dL);
    op.face_c1[i] = dK / (dK + dL);
  }
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.is_boundary_face(f)) continue;
    int c = mesh.face_cones(f)[0];
    trip.emplace_back(mesh.cone_cell(c), mesh.cone_cell(c),
                      mesh.face_measure(f) / mesh.cone_distance(c));
  }
  if (mass_scale != 0.0)
    for (int K = 0; K < n; ++K)
      trip.emplace_back(K, K, mass_scale * mesh.cell_measure(K));
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

FunctionalData::FunctionalData(const AdmissibleMesh& m)
    : mesh(&m),
      a(Eigen::VectorXd::Zero(m.n_cells())),
      b(Eigen::VectorXd::Zero(m.n_cones())) {}

double FunctionalData::operator()(const DiscreteField& v) const {
  if (v.mesh != mesh) throw DataMisalignment("functional bound to another mesh");
  double s = a.dot(v.cell);
  for (int c = 0; c < mesh->n_cones(); ++c) s += b[c] * v.jump(c);
  return s;
}

FunctionalData steady_functional(const AdmissibleMesh& m, const SteadyData& data) {
  FunctionalData l(m);
  if (data.load_integral)
    parallel_chunks(m.n_cells(), [&](int, long begin, long end) {
      for (long K = begin; K < end; ++K)
        l.a[K] = data.load_integral(m, static_cast<int>(K));
    });
  if (data.flux_mean)
    parallel_chunks(m.n_cones(), [&](int, long begin, long end) {
      for (long c = begin; c < end; ++c)
        l.b[c] = -m.face_measure(m.cone_face(static_cast<int>(c))) *
                 data.flux_mean(m, static_cast<int>(c));
    });
  return l;
}

FunctionalData conformity_functional(const AdmissibleMesh& m, const HdivOracle& phi) {
  FunctionalData l(m);
  if (phi.div_integral)
    parallel_chunks(m.n_cells(), [&](int, long begin, long end) {
      for (long K = begin; K < end; ++K)
        l.a[K] = phi.div_integral(m, static_cast<int>(K));
    });
  parallel_chunks(m.n_cones(), [&](int, long begin, long end) {
    for (long c = begin; c < end; ++c)
      l.b[c] = m.face_measure(m.cone_face(static_cast<int>(c))) *
               phi.normal_mean(m, static_cast<int>(c));
  });
  return l;
}

FunctionalData mass_functional(const AdmissibleMesh& m, const Eigen::VectorXd& g) {
  if (g.size() != m.n_cells())
    throw DataMisalignment("cell vector length does not match mesh");
  FunctionalData l(m);
  for (int K = 0; K < m.n_cells(); ++K) l.a[K] = m.cell_measure(K) * g[K];
  return l;
}

Eigen::VectorXd solve_cells(const TpfaOperator& op, const Eigen::VectorXd& rhs) {
  const auto& A = op.matrix;
  int n = static_cast<int>(A.rows());
  if (rhs.size() != n) throw DataMisalignment("rhs length does not match matrix");
  double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Eigen::VectorXd::Zero(n);

  Eigen::VectorXd diag = A.diagonal();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = r.cwiseQuotient(diag);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  double tol = 1e-12 * rhs_norm;
  long max_iter = 10L * n;
  for (long it = 0; it < max_iter; ++it) {
    Eigen::VectorXd Ap = A * p;
    double pAp = p.dot(Ap);
    if (pAp <= 0.0) break;
    double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    if (r.norm() <= tol) return x;
    z = r.cwiseQuotient(diag);
    double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (n <= 2000) {
    Eigen::MatrixXd dense(A);
    Eigen::LLT<Eigen::MatrixXd> llt(dense);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd y = llt.solve(rhs);
      if ((A * y - rhs).norm() <= 1e-10 * rhs_norm) return y;
    }
  }
  throw SolverDivergence("conjugate gradients failed to reach tolerance");
}

DiscreteField solve(const TpfaOperator& op, const FunctionalData& l) {
  const AdmissibleMesh& m = *op.mesh;
  if (l.mesh != op.mesh)
    throw DataMisalignment("functional bound to another mesh");
  // eliminate the interior face unknowns
  Eigen::VectorXd rhs = l.a;
  Eigen::VectorXd face_src = Eigen::VectorXd::Zero(m.n_interior_faces());
  for (int K = 0; K < m.n_cells(); ++K) {
    for (int c = m.cone_begin(K); c < m.cone_end(K); ++c) {
      rhs[K] -= l.b[c];
      int f = m.cone_face(c);
      if (m.is_boundary_face(f)) continue;
      auto [c0, c1] = m.face_cones(f);
      int other = (c == c0) ? c1 : c0;
      rhs[K] += m.cone_distance(other) * (l.b[c] + l.b[other]) /
                (m.cone_distance(c0) + m.cone_distance(c1));
    }
  }
  for (int i = 0; i < m.n_interior_faces(); ++i) {
    int f = m.interior_face(i);
    auto [c0, c1] = m.face_cones(f);
    double dK = m.cone_distance(c0), dL = m.cone_distance(c1);
    face_src[i] = dK * dL * (l.b[c0] + l.b[c1]) / (m.face_measure(f) * (dK + dL));
  }

  DiscreteField w(m);
  w.cell = solve_cells(op, rhs);
  for (int i = 0; i < m.n_interior_faces(); ++i) {
    int f = m.interior_face(i);
    auto [c0, c1] = m.face_cones(f);
    w.face[i] = op.face_c0[i] * w.cell[m.cone_cell(c0)] +
                op.face_c1[i] * w.cell[m.cone_cell(c1)] + face_src[i];
  }
  return w;
}

DiscreteField riesz(const AdmissibleMesh& mesh, const FunctionalData& l) {
  return solve(assemble_operator(mesh), l);
}

double dual_norm(const TpfaOperator& op, const FunctionalData& l) {
  if (op.mass_scale != 0.0)
    throw DataMisalignment("dual norm requires the pure inner-product operator");
  return std::sqrt(std::max(0.0, l(solve(op, l))));
}

double dual_norm(const AdmissibleMesh& mesh, const FunctionalData& l) {
  return dual_norm(assemble_operator(mesh), l);
}

DiscreteField discrete_riesz_lift(const TpfaOperator& op, const Eigen::VectorXd& g) {
  if (op.mass_scale != 0.0)
    throw DataMisalignment("riesz lift requires the pure inner-product operator");
  return solve(op, mass_functional(*op.mesh, g));
}

double weak_residual(const TpfaOperator& op, const DiscreteField& w,
                     const FunctionalData& l) {
  const AdmissibleMesh& m = *op.mesh;
  if (w.mesh != &m || l.mesh != &m)
    throw DataMisalignment("field or functional bound to another mesh");
  double worst = 0.0;
  for (int i = 0; i < m.n_interior_faces(); ++i) {
    int f = m.interior_face(i);
    auto [c0, c1] = m.face_cones(f);
    double res = m.face_measure(f) * (w.jump(c0) / m.cone_distance(c0) +
                                      w.jump(c1) / m.cone_distance(c1)) -
                 (l.b[c0] + l.b[c1]);
    worst = std::max(worst, std::abs(res));
  }
  for (int K = 0; K < m.n_cells(); ++K) {
    double res = op.mass_scale * m.cell_measure(K) * w.cell[K] - l.a[K];
    for (int c = m.cone_begin(K); c < m.cone_end(K); ++c)
      res += l.b[c] - m.face_measure(m.cone_face(c)) * w.jump(c) /
                          m.cone_distance(c);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

}  // namespace tpfa

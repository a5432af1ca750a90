#include "tpfa/transient.hpp"

#include <cmath>
#include <memory>

#include "tpfa/errors.hpp"
#include "tpfa/parallel.hpp"

namespace tpfa {

double CouplingMap::factor() const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Identity: return 1.0;
    default: return lambda;
  }
}

CouplingMap coupling_zero() { return {CouplingMap::Kind::Zero, 0.0}; }
CouplingMap coupling_identity() { return {CouplingMap::Kind::Identity, 1.0}; }

CouplingMap coupling_scaled(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw DomainError("coupling factor must lie in [0, 1]");
  return {CouplingMap::Kind::Scaled, lambda};
}

namespace {

/// 3-point Gauss integral of g over [t0, t1].
double gauss3(const std::function<double(double)>& g, double t0, double t1) {
  double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
  double off = half * std::sqrt(0.6);
  return half *
         (5.0 / 9.0 * (g(mid - off) + g(mid + off)) + 8.0 / 9.0 * g(mid));
}

}  // namespace

TransientProblemData time_average_data(const TimeDependentData& data,
                                       const AdmissibleMesh& mesh,
                                       const TimeGrid& grid,
                                       Eigen::VectorXd xi0, CouplingMap phi) {
  if (grid.steps < 1 || !(grid.horizon > 0.0))
    throw DomainError("time grid needs a positive horizon and at least one step");
  if (xi0.size() != mesh.n_cells())
    throw DataMisalignment("coupling datum length does not match mesh");
  TransientProblemData out;
  out.mesh = &mesh;
  out.grid = grid;
  out.xi0 = std::move(xi0);
  out.coupling = phi;
  double k = grid.dt();
  for (int m = 1; m <= grid.steps; ++m) {
    double t0 = (m - 1) * k, t1 = m * k;
    FunctionalData l(mesh);
    if (data.load_integral)
      parallel_chunks(mesh.n_cells(), [&](int, long begin, long end) {
        for (long K = begin; K < end; ++K)
          l.a[K] = gauss3(
                       [&](double t) {
                         return data.load_integral(mesh, static_cast<int>(K), t);
                       },
                       t0, t1) /
                   k;
      });
    if (data.flux_mean)
      parallel_chunks(mesh.n_cones(), [&](int, long begin, long end) {
        for (long c = begin; c < end; ++c)
          l.b[c] = -mesh.face_measure(mesh.cone_face(static_cast<int>(c))) *
                   gauss3(
                       [&](double t) {
                         return data.flux_mean(mesh, static_cast<int>(c), t);
                       },
                       t0, t1) /
                   k;
      });
    out.slab.push_back(std::move(l));
  }
  return out;
}

FunctionalData with_history(const FunctionalData& slab, const DiscreteField& prev,
                            double k) {
  if (slab.mesh != prev.mesh)
    throw DataMisalignment("slab data and state on different meshes");
  FunctionalData l = slab;
  for (int K = 0; K < slab.mesh->n_cells(); ++K)
    l.a[K] += slab.mesh->cell_measure(K) * prev.cell[K] / k;
  return l;
}

DiscreteField step(const TpfaOperator& op, const FunctionalData& slab,
                   const DiscreteField& prev) {
  if (!(op.mass_scale > 0.0))
    throw DataMisalignment("stepping needs the mass-augmented operator");
  return solve(op, with_history(slab, prev, 1.0 / op.mass_scale));
}

DiscreteField complete_faces(const AdmissibleMesh& mesh, Eigen::VectorXd cells) {
  if (cells.size() != mesh.n_cells())
    throw DataMisalignment("cell vector length does not match mesh");
  DiscreteField u(mesh);
  u.cell = std::move(cells);
  for (int i = 0; i < mesh.n_interior_faces(); ++i) {
    int f = mesh.interior_face(i);
    auto [c0, c1] = mesh.face_cones(f);
    double dK = mesh.cone_distance(c0), dL = mesh.cone_distance(c1);
    u.face[i] = (dL * u.cell[mesh.cone_cell(c0)] +
                 dK * u.cell[mesh.cone_cell(c1)]) /
                (dK + dL);
  }
  return u;
}

SpaceTimeField solve_transient(const TransientProblemData& data) {
  const AdmissibleMesh& mesh = *data.mesh;
  int N = data.grid.steps;
  if (static_cast<int>(data.slab.size()) != N)
    throw DataMisalignment("slab count does not match the time grid");
  double k = data.grid.dt();
  TpfaOperator op = assemble_operator(mesh, 1.0 / k);

  auto march = [&](const Eigen::VectorXd& initial) {
    SpaceTimeField u;
    u.mesh = &mesh;
    u.grid = data.grid;
    u.at.reserve(N + 1);
    u.at.push_back(complete_faces(mesh, initial));
    for (int m = 1; m <= N; ++m)
      u.at.push_back(step(op, data.slab[m - 1], u.at[m - 1]));
    return u;
  };

  double factor = data.coupling.factor();
  if (factor == 0.0) return march(data.xi0);

  Eigen::VectorXd initial = data.xi0;
  for (int sweep = 0; sweep < 500; ++sweep) {
    SpaceTimeField u = march(initial);
    Eigen::VectorXd next = data.xi0 + factor * u.at[N].cell;
    double change = cell_l2_norm(mesh, next - initial);
    if (change < 1e-11) return u;
    initial = std::move(next);
  }
  throw FixedPointStall("initial-state fixed point did not converge");
}

std::vector<DiscreteField> time_derivative(const SpaceTimeField& u) {
  double k = u.grid.dt();
  std::vector<DiscreteField> d;
  d.reserve(u.at.size() - 1);
  for (size_t m = 1; m < u.at.size(); ++m) {
    DiscreteField slab = u.at[m];
    slab -= u.at[m - 1];
    slab *= 1.0 / k;
    d.push_back(std::move(slab));
  }
  return d;
}

namespace {

struct SpatialCache {
  ConeField gs;         // cone means of the shape's normal gradient
  Eigen::VectorXd sk;   // cell integrals of the shape
  double s2 = 0.0;      // integral of shape^2
  double a2 = 0.0;      // sum |D| gs^2
};

SpatialCache cache_shape(const ExactSolutionOracle& spatial,
                         const AdmissibleMesh& mesh, bool with_value_sq) {
  SpatialCache c;
  c.gs = spatial.mean_normal_gradient(mesh);
  c.sk.resize(mesh.n_cells());
  parallel_chunks(mesh.n_cells(), [&](int, long begin, long end) {
    for (long K = begin; K < end; ++K)
      c.sk[K] = spatial.cell_integral(mesh, static_cast<int>(K));
  });
  if (with_value_sq) {
    const Point* sp = spatial.special ? &*spatial.special : nullptr;
    c.s2 = parallel_sum(mesh.n_cells(), [&](long K) {
      return integrate_cell(
          mesh, static_cast<int>(K),
          [&](const Point& x) {
            double v = spatial.value(x);
            return v * v;
          },
          sp, spatial.refine_levels);
    });
  }
  double a2 = 0.0;
  for (int c2 = 0; c2 < mesh.n_cones(); ++c2)
    a2 += mesh.cone_measure(c2) * c.gs.val[c2] * c.gs.val[c2];
  c.a2 = a2;
  return c;
}

/// Slab contribution of || scale(t) gs - g ||^2 over cones, integrated in t.
double slab_gap_sq(const AdmissibleMesh& mesh, const SpatialCache& c,
                   const std::function<double(double)>& scale, double t0,
                   double t1, const ConeField& g) {
  double b = 0.0, cc = 0.0;
  for (int i = 0; i < mesh.n_cones(); ++i) {
    double w = mesh.cone_measure(i);
    b += w * c.gs.val[i] * g.val[i];
    cc += w * g.val[i] * g.val[i];
  }
  double i2 = gauss3([&](double t) { return scale(t) * scale(t); }, t0, t1);
  double i1 = gauss3(scale, t0, t1);
  return i2 * c.a2 - 2.0 * i1 * b + (t1 - t0) * cc;
}

}  // namespace

DeltaTimeBreakdown delta_time(const TransientExactBundle& exact,
                              const SpaceTimeField& u) {
  const AdmissibleMesh& mesh = *u.mesh;
  double d = static_cast<double>(mesh.dim());
  double k = u.grid.dt();
  int N = u.grid.steps;
  SpatialCache cache = cache_shape(exact.spatial, mesh, true);
  TpfaOperator op0 = assemble_operator(mesh);
  std::vector<DiscreteField> deriv = time_derivative(u);

  double riesz_sq = 0.0, grad_sq = 0.0;
  for (int m = 1; m <= N; ++m) {
    double t0 = (m - 1) * k, t1 = m * k;
    ConeField r = normal_difference(
        discrete_riesz_lift(op0, deriv[m - 1].cell));
    double rf = exact.riesz_factor;
    riesz_sq += slab_gap_sq(
        mesh, cache, [&](double t) { return rf * exact.dtau(t); }, t0, t1, r);
    grad_sq += slab_gap_sq(mesh, cache, exact.tau, t0, t1,
                           normal_difference(u.at[m]));
  }

  DeltaTimeBreakdown out;
  out.riesz_term = d * std::sqrt(std::max(0.0, riesz_sq));
  out.grad_term = d * std::sqrt(std::max(0.0, grad_sq));

  double worst = 0.0;
  auto value_gap_sq = [&](double t, const DiscreteField& v) {
    double tau = exact.tau(t);
    double q = 0.0;
    for (int K = 0; K < mesh.n_cells(); ++K)
      q += mesh.cell_measure(K) * v.cell[K] * v.cell[K];
    return tau * tau * cache.s2 - 2.0 * tau * cache.sk.dot(v.cell) + q;
  };
  worst = std::max(worst, value_gap_sq(0.0, u.at[0]));
  for (int m = 1; m <= N; ++m) {
    double t0 = (m - 1) * k;
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0})
      worst = std::max(worst, value_gap_sq(t0 + frac * k, u.at[m]));
  }
  out.max_term = std::sqrt(std::max(0.0, worst));
  out.total = out.riesz_term + out.grad_term + out.max_term;
  return out;
}

std::vector<FunctionalData> manufactured_conformity_slabs(
    const AdmissibleMesh& mesh, const TransientExactBundle& exact,
    const TimeGrid& grid) {
  if (exact.riesz_factor == 0.0)
    throw OracleMissing("bundle lacks the Riesz eigenvalue of its shape");
  SpatialCache cache = cache_shape(exact.spatial, mesh, false);
  double k = grid.dt();
  std::vector<FunctionalData> slabs;
  for (int m = 1; m <= grid.steps; ++m) {
    double t0 = (m - 1) * k, t1 = m * k;
    double mean_scale = gauss3(
                            [&](double t) {
                              return exact.riesz_factor * exact.dtau(t) +
                                     exact.tau(t);
                            },
                            t0, t1) /
                        k;
    FunctionalData l(mesh);
    for (int K = 0; K < mesh.n_cells(); ++K)
      l.a[K] = -mean_scale * cache.sk[K] / exact.riesz_factor;
    for (int c = 0; c < mesh.n_cones(); ++c)
      l.b[c] = mesh.face_measure(mesh.cone_face(c)) * mean_scale *
               cache.gs.val[c];
    slabs.push_back(std::move(l));
  }
  return slabs;
}

double zeta_time_slabs(const TpfaOperator& op0,
                       const std::vector<FunctionalData>& slabs,
                       const TimeGrid& grid) {
  if (static_cast<int>(slabs.size()) != grid.steps)
    throw DataMisalignment("slab count does not match the time grid");
  double d = static_cast<double>(op0.mesh->dim());
  double k = grid.dt();
  double sq = 0.0;
  for (const FunctionalData& l : slabs) {
    double z = dual_norm(op0, l);
    sq += k * d * z * z;
  }
  double out = std::sqrt(sq);
  return out < 1e-9 ? 0.0 : out;
}

EnergyMargins energy_checks(const SpaceTimeField& w) {
  const AdmissibleMesh& mesh = *w.mesh;
  double d = static_cast<double>(mesh.dim());
  double k = w.grid.dt();
  int N = w.grid.steps;
  TpfaOperator op0 = assemble_operator(mesh);
  std::vector<DiscreteField> deriv = time_derivative(w);

  double a_sq = 0.0, b_sq = 0.0, pairing = 0.0;
  for (int m = 1; m <= N; ++m) {
    ConeField r = normal_difference(
        discrete_riesz_lift(op0, deriv[m - 1].cell));
    ConeField g = normal_difference(w.at[m]);
    double rn = r.l2_norm(), gn = g.l2_norm();
    a_sq += k * d * d * rn * rn;
    b_sq += k * d * d * gn * gn;
    double dot = 0.0;
    for (int c = 0; c < mesh.n_cones(); ++c)
      dot += mesh.cone_measure(c) * r.val[c] * g.val[c];
    pairing += k * d * dot;
  }

  double max_norm = 0.0;
  for (const DiscreteField& u : w.at)
    max_norm = std::max(max_norm, cell_l2_norm(mesh, u.cell));
  double w0 = cell_l2_norm(mesh, w.at[0].cell);
  double wN = cell_l2_norm(mesh, w.at[N].cell);
  double diam = mesh.domain_diameter();

  EnergyMargins out;
  out.uniform = std::sqrt(a_sq) + std::sqrt(b_sq) + w0 - max_norm;
  out.telescope = pairing - 0.5 * (wN * wN - w0 * w0);
  out.terminal =
      a_sq + (1.0 + diam * diam / w.grid.horizon) * b_sq - wN * wN;
  return out;
}

TransientSetup manufactured_heat(const AdmissibleMesh& mesh) {
  const double pi = std::acos(-1.0);
  TransientSetup s;
  s.bundle.spatial = make_sin_sin();
  s.bundle.tau = [](double t) { return std::exp(-t); };
  s.bundle.dtau = [](double t) { return -std::exp(-t); };
  s.bundle.riesz_factor = 1.0 / (2.0 * pi * pi);

  auto sk = std::make_shared<Eigen::VectorXd>(mesh.n_cells());
  const ExactSolutionOracle& shape = s.bundle.spatial;
  for (int K = 0; K < mesh.n_cells(); ++K)
    (*sk)[K] = shape.cell_integral(mesh, K);
  const AdmissibleMesh* bound = &mesh;
  double coef = 2.0 * pi * pi - 1.0;
  s.data.load_integral = [sk, bound, coef](const AdmissibleMesh& m, int K,
                                           double t) {
    if (&m != bound)
      throw DataMisalignment("manufactured data bound to another mesh");
    return coef * std::exp(-t) * (*sk)[K];
  };
  return s;
}

Eigen::VectorXd manufactured_heat_xi0(const AdmissibleMesh& mesh,
                                      const TimeGrid& grid, CouplingMap phi) {
  ExactSolutionOracle shape = make_sin_sin();
  double scale = 1.0 - phi.factor() * std::exp(-grid.horizon);
  Eigen::VectorXd xi(mesh.n_cells());
  for (int K = 0; K < mesh.n_cells(); ++K)
    xi[K] = scale * shape.cell_integral(mesh, K) / mesh.cell_measure(K);
  return xi;
}

}  // namespace tpfa

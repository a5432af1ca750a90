#include "tpfa/singular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tpfa/errors.hpp"
#include "tpfa/format.hpp"

namespace tpfa {

Point singular_center() { return Point(0.5, 0.5, 0.0); }

double upper_incomplete_gamma(double a, double x) {
  if (a <= 0.0 || x < 0.0)
    throw DomainError("incomplete gamma requires a > 0 and x >= 0");
  if (x == 0.0) return std::tgamma(a);
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) {
    // lower series, subtracted from the complete gamma
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n <= 200; ++n) {
      term *= x / (a + n);
      sum += term;
      if (term < sum * 1e-16)
        return std::tgamma(a) - sum * std::exp(-x + a * std::log(x));
    }
    throw QuadratureFailure("incomplete gamma series did not converge");
  }
  // Lentz continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15)
      return h * std::exp(-x + a * std::log(x));
  }
  throw QuadratureFailure("incomplete gamma continued fraction did not converge");
}

namespace {

const double kLog2 = std::log(2.0);

double branch_distance(const Point& x) {
  return std::max(std::abs(x.x() - 0.5), std::abs(x.y() - 0.5));
}

}  // namespace

double singular_value(const Point& x) {
  double m = branch_distance(x);
  if (m == 0.0) throw SingularPoint("value undefined at the center");
  return std::pow(-std::log(m), kSingularGamma) -
         std::pow(kLog2, kSingularGamma);
}

Point singular_gradient(const Point& x) {
  double dx = x.x() - 0.5, dy = x.y() - 0.5;
  double ax = std::abs(dx), ay = std::abs(dy);
  if (ax == 0.0 && ay == 0.0)
    throw SingularPoint("gradient undefined at the center");
  if (ax == ay) throw DiagonalPoint("gradient undefined where branches tie");
  double m = std::max(ax, ay);
  double slope =
      -kSingularGamma * std::pow(-std::log(m), kSingularGamma - 1.0) / m;
  if (ax > ay) return Point(slope * (dx > 0 ? 1.0 : -1.0), 0.0, 0.0);
  return Point(0.0, slope * (dy > 0 ? 1.0 : -1.0), 0.0);
}

NormPair singular_exact_norms(double r) {
  if (!(r > 0.0) || r > kSingularRadius)
    throw DomainError("radius outside (0, 1/2]");
  const double g = kSingularGamma;
  double L = -std::log(r);
  NormPair out;
  out.grad = std::sqrt(8.0 * g * g / (1.0 - 2.0 * g) *
                       std::pow(L, 2.0 * g - 1.0));
  double sq = std::pow(2.0, 2.0 - 2.0 * g) *
                  upper_incomplete_gamma(2.0 * g + 1.0, 2.0 * L) -
              std::pow(2.0, 3.0 - g) * std::pow(L, g) *
                  upper_incomplete_gamma(g + 1.0, 2.0 * L) +
              4.0 * r * r * std::pow(L, 2.0 * g);
  out.value = std::sqrt(std::max(0.0, sq));
  return out;
}

namespace {

/// Mean of (-log t)^gamma over the affine range [ta, tb] within (0, 1).
double log_power_mean(double ta, double tb) {
  const double a = kSingularGamma + 1.0;
  if (std::abs(tb - ta) <= 1e-13 * std::max({ta, tb, 1e-30})) {
    double mid = 0.5 * (ta + tb);
    if (mid <= 0.0) throw SingularPoint("segment collapsed onto the center");
    return std::pow(-std::log(mid), kSingularGamma);
  }
  auto primitive = [a](double t) {
    // d/dt Gamma(gamma+1, -log t) = (-log t)^gamma, extended by 0 at t = 0
    return t <= 0.0 ? 0.0 : upper_incomplete_gamma(a, -std::log(t));
  };
  return (primitive(tb) - primitive(ta)) / (tb - ta);
}

}  // namespace

double singular_segment_integral(const Point& p, const Point& q) {
  double len = (q - p).norm();
  if (len == 0.0) return 0.0;
  double px = p.x() - 0.5, py = p.y() - 0.5;
  double dx = q.x() - p.x(), dy = q.y() - p.y();

  // parameters where a coordinate or the branch gap changes sign
  double cuts[6];
  int n_cuts = 0;
  cuts[n_cuts++] = 0.0;
  cuts[n_cuts++] = 1.0;
  const double num[4] = {px, py, px - py, px + py};
  const double den[4] = {dx, dy, dx - dy, dx + dy};
  for (int i = 0; i < 4; ++i) {
    if (den[i] == 0.0) continue;
    double s = -num[i] / den[i];
    if (s > 1e-14 && s < 1.0 - 1e-14) cuts[n_cuts++] = s;
  }
  std::sort(cuts, cuts + n_cuts);

  const double cst = std::pow(kLog2, kSingularGamma);
  double total = 0.0;
  double prev = cuts[0];
  double t_prev = branch_distance(p);
  for (int i = 1; i < n_cuts; ++i) {
    double s = cuts[i];
    if (s - prev <= 1e-14) continue;
    double t_here = branch_distance(Point(p.x() + s * dx, p.y() + s * dy, 0.0));
    total += (s - prev) * (log_power_mean(t_prev, t_here) - cst);
    prev = s;
    t_prev = t_here;
  }
  return total * len;
}

double singular_cone_mean(const AdmissibleMesh& m, int cone) {
  int f = m.cone_face(cone);
  const Point& a = m.vertex(m.face_vertices(f)[0]);
  const Point& b = m.vertex(m.face_vertices(f)[1]);
  const Point& xk = m.cell_point(m.cone_cell(cone));
  const Point& n = m.cone_normal(cone);
  auto nu = [](const Point& p, const Point& q, const Point& r) {
    Point t = q - p;
    Point out(t.y(), -t.x(), 0.0);
    out.normalize();
    if (out.dot(0.5 * (p + q) - r) < 0.0) out = -out;
    return out;
  };
  double s = singular_segment_integral(a, b) * nu(a, b, xk).dot(n) +
             singular_segment_integral(xk, a) * nu(xk, a, b).dot(n) +
             singular_segment_integral(b, xk) * nu(b, xk, a).dot(n);
  return s / m.cone_measure(cone);
}

ExactSolutionOracle singular_oracle() {
  ExactSolutionOracle o;
  o.value = [](const Point& x) { return singular_value(x); };
  o.gradient = [](const Point& x) { return singular_gradient(x); };
  o.special = singular_center();
  o.cone_mean_override = [](const AdmissibleMesh& m, int c) {
    return singular_cone_mean(m, c);
  };
  o.cell_gradient_integral_override = [](const AdmissibleMesh& m, int K) {
    Point g = Point::Zero();
    for (int c = m.cone_begin(K); c < m.cone_end(K); ++c) {
      int f = m.cone_face(c);
      g += singular_segment_integral(m.vertex(m.face_vertices(f)[0]),
                                     m.vertex(m.face_vertices(f)[1])) *
           m.cone_normal(c);
    }
    return g;
  };
  o.grad_sq_override = [](const AdmissibleMesh&) {
    double n = singular_exact_norms(kSingularRadius).grad;
    return n * n;
  };
  return o;
}

SteadyData singular_data() {
  SteadyData d;
  d.flux_mean = [](const AdmissibleMesh& m, int c) {
    return -singular_cone_mean(m, c);
  };
  return d;
}

std::vector<ErrorReport> run_singular_benchmark(
    const std::vector<const AdmissibleMesh*>& meshes) {
  ExactSolutionOracle exact = singular_oracle();
  SteadyData data = singular_data();
  std::vector<ErrorReport> rows;
  rows.reserve(meshes.size());
  for (const AdmissibleMesh* m : meshes)
    rows.push_back(full_report(*m, exact, data));
  return rows;
}

const char* const kBenchCsvHeader = "h,e1,e2,e3,e4,e5";

std::string bench_csv_row(const ErrorReport& r) {
  std::ostringstream os;
  os << format_full(r.h) << ',' << format_full(r.interp_l2) << ','
     << format_full(r.l2) << ',' << format_full(r.normal_grad) << ','
     << format_full(r.delta) << ',' << format_full(r.interp_upper);
  return os.str();
}

}  // namespace tpfa

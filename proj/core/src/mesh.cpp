#include "tpfa/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace tpfa {

namespace {

constexpr double kRelTol = 1e-12;
constexpr double kOrthoTol = 1e-10;

std::string describe(const char* what, int id) {
  std::ostringstream os;
  os << what << " " << id;
  return os.str();
}

/// Circumcenter of a planar triangle (z = 0)
Point circumcenter(const Point& a, const Point& b, const Point& c) {
  double d = 2.0 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) +
                    c.x() * (a.y() - b.y()));
  if (d == 0.0) throw DegenerateGeometry("degenerate triangle in circumcenter");
  double a2 = a.x() * a.x() + a.y() * a.y();
  double b2 = b.x() * b.x() + b.y() * b.y();
  double c2 = c.x() * c.x() + c.y() * c.y();
  double ux = (a2 * (b.y() - c.y()) + b2 * (c.y() - a.y()) + c2 * (a.y() - b.y())) / d;
  double uy = (a2 * (c.x() - b.x()) + b2 * (a.x() - c.x()) + c2 * (b.x() - a.x())) / d;
  return Point(ux, uy, 0.0);
}

/// Sorts the vertices of a convex planar polygon counterclockwise around their mean
void sort_ccw(std::vector<int>& poly, const std::vector<Point>& verts) {
  Point mean = Point::Zero();
  for (int v : poly) mean += verts[v];
  mean /= static_cast<double>(poly.size());
  std::sort(poly.begin(), poly.end(), [&](int u, int v) {
    double au = std::atan2(verts[u].y() - mean.y(), verts[u].x() - mean.x());
    double av = std::atan2(verts[v].y() - mean.y(), verts[v].x() - mean.x());
    return au < av;
  });
}

double polygon_area(const std::vector<int>& poly, const std::vector<Point>& verts) {
  double s = 0.0;
  int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    const Point& p = verts[poly[i]];
    const Point& q = verts[poly[(i + 1) % m]];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(s);
}

/// Area and area-centroid of a planar polygonal face embedded in 3d (fan from vertex 0)
std::pair<double, Point> face_area_centroid_3d(const std::vector<int>& poly,
                                               const std::vector<Point>& verts) {
  double area = 0.0;
  Point centroid = Point::Zero();
  const Point& a = verts[poly[0]];
  for (size_t i = 1; i + 1 < poly.size(); ++i) {
    const Point& b = verts[poly[i]];
    const Point& c = verts[poly[i + 1]];
    double t = 0.5 * (b - a).cross(c - a).norm();
    area += t;
    centroid += t * (a + b + c) / 3.0;
  }
  if (area > 0.0) centroid /= area;
  return {area, centroid};
}

Point face_normal_3d(const std::vector<int>& poly, const std::vector<Point>& verts) {
  const Point& a = verts[poly[0]];
  Point n = Point::Zero();
  for (size_t i = 1; i + 1 < poly.size(); ++i)
    n += (verts[poly[i]] - a).cross(verts[poly[i + 1]] - a);
  double ln = n.norm();
  if (ln == 0.0) throw DegenerateGeometry("zero-area face");
  return n / ln;
}

/// Exact diameter of a planar point set: convex hull + rotating pairs
double planar_diameter(const std::vector<Point>& pts) {
  std::vector<Point> p = pts;
  std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  p.erase(std::unique(p.begin(), p.end(),
                      [](const Point& a, const Point& b) {
                        return a.x() == b.x() && a.y() == b.y();
                      }),
          p.end());
  int n = static_cast<int>(p.size());
  if (n < 2) return 0.0;
  auto cross2 = [](const Point& o, const Point& a, const Point& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Point> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  double best = 0.0;
  for (size_t i = 0; i < hull.size(); ++i)
    for (size_t j = i + 1; j < hull.size(); ++j)
      best = std::max(best, (hull[i] - hull[j]).norm());
  return best;
}

}  // namespace

AdmissibleMesh build_mesh(const RawMesh& raw) {
  if (raw.dim != 2 && raw.dim != 3) throw ParseError("mesh dimension must be 2 or 3");
  const int nc = static_cast<int>(raw.cell_vertices.size());
  if (nc == 0) throw ParseError("mesh has no cells");
  if (raw.cell_points.size() != raw.cell_vertices.size())
    throw ParseError("cell point count does not match cell count");

  AdmissibleMesh m;
  m.dim_ = raw.dim;
  m.vertices_ = raw.vertices;
  m.cell_vertices_ = raw.cell_vertices;
  m.cell_points_ = raw.cell_points;
  const int nv = m.n_vertices();
  for (const auto& cv : m.cell_vertices_) {
    if (cv.size() < static_cast<size_t>(raw.dim + 1))
      throw ParseError("cell with fewer vertices than dim+1");
    for (int v : cv)
      if (v < 0 || v >= nv) throw ParseError("cell vertex index out of range");
  }

  if (m.dim_ == 2)
    for (auto& cv : m.cell_vertices_) sort_ccw(cv, m.vertices_);

  // Face list: explicit when provided, otherwise the edges of each planar cell.
  if (!raw.faces.empty()) {
    std::map<std::vector<int>, int> seen;
    for (const auto& rf : raw.faces) {
      std::vector<int> key = rf.vertices;
      std::sort(key.begin(), key.end());
      if (key.size() < static_cast<size_t>(raw.dim) || seen.count(key))
        throw NonConformity("duplicate or undersized face");
      seen[key] = static_cast<int>(m.face_vertices_.size());
      if (rf.cell_a < 0 || rf.cell_a >= nc ||
          (rf.cell_b != -1 && (rf.cell_b < 0 || rf.cell_b >= nc)))
        throw NonConformity("face linked to nonexistent " + describe("cell", rf.cell_a));
      m.face_vertices_.push_back(rf.vertices);
      // keep the lower cell index first so cell-major traversal meets it first
      if (rf.cell_b != -1 && rf.cell_b < rf.cell_a)
        m.face_cells_.push_back({rf.cell_b, rf.cell_a});
      else
        m.face_cells_.push_back({rf.cell_a, rf.cell_b});
    }
    // every face's vertices must belong to each cell it claims to bound
    for (int f = 0; f < static_cast<int>(m.face_vertices_.size()); ++f) {
      for (int K : m.face_cells_[f]) {
        if (K < 0) continue;
        for (int v : m.face_vertices_[f])
          if (std::find(m.cell_vertices_[K].begin(), m.cell_vertices_[K].end(), v) ==
              m.cell_vertices_[K].end())
            throw NonConformity("vertex of " + describe("face", f) +
                                " not a vertex of " + describe("cell", K));
      }
    }
  } else {
    if (raw.dim != 2)
      throw ParseError("explicit faces are required for dim == 3");
    for (auto& cv : m.cell_vertices_) sort_ccw(cv, m.vertices_);
    std::map<std::pair<int, int>, int> edge_of;
    for (int K = 0; K < nc; ++K) {
      const auto& cv = m.cell_vertices_[K];
      int mlen = static_cast<int>(cv.size());
      for (int i = 0; i < mlen; ++i) {
        int a = cv[i], b = cv[(i + 1) % mlen];
        auto key = std::minmax(a, b);
        auto it = edge_of.find(key);
        if (it == edge_of.end()) {
          edge_of[key] = static_cast<int>(m.face_vertices_.size());
          m.face_vertices_.push_back({a, b});
          m.face_cells_.push_back({K, -1});
        } else {
          auto& fc = m.face_cells_[it->second];
          if (fc[1] != -1)
            throw NonConformity(describe("face", it->second) +
                                " shared by more than two cells");
          fc[1] = K;
        }
      }
    }
  }

  const int nf = static_cast<int>(m.face_vertices_.size());
  m.face_measures_.resize(nf);
  m.face_centroids_.resize(nf);
  for (int f = 0; f < nf; ++f) {
    if (m.dim_ == 2) {
      const Point& a = m.vertices_[m.face_vertices_[f][0]];
      const Point& b = m.vertices_[m.face_vertices_[f][1]];
      m.face_measures_[f] = (b - a).norm();
      m.face_centroids_[f] = 0.5 * (a + b);
    } else {
      auto [area, centroid] = face_area_centroid_3d(m.face_vertices_[f], m.vertices_);
      m.face_measures_[f] = area;
      m.face_centroids_[f] = centroid;
    }
    if (!(m.face_measures_[f] > 0.0))
      throw DegenerateGeometry("zero measure on " + describe("face", f));
  }

  // cell measures, diameters; cell-face incidence from the face-cell links
  std::vector<std::vector<int>> cell_faces(nc);
  for (int f = 0; f < nf; ++f)
    for (int K : m.face_cells_[f])
      if (K >= 0) cell_faces[K].push_back(f);
  m.cell_measures_.resize(nc);
  m.cell_diameters_.resize(nc);
  for (int K = 0; K < nc; ++K) {
    const auto& cv = m.cell_vertices_[K];
    if (cell_faces[K].size() < static_cast<size_t>(m.dim_ + 1))
      throw NonConformity(describe("cell", K) + " has too few faces");
    double diam = 0.0;
    for (size_t i = 0; i < cv.size(); ++i)
      for (size_t j = i + 1; j < cv.size(); ++j)
        diam = std::max(diam, (m.vertices_[cv[i]] - m.vertices_[cv[j]]).norm());
    m.cell_diameters_[K] = diam;
    if (m.dim_ == 2) {
      m.cell_measures_[K] = polygon_area(cv, m.vertices_);
    } else {
      // divergence theorem over the boundary, fanned from the vertex mean
      Point mean = Point::Zero();
      for (int v : cv) mean += m.vertices_[v];
      mean /= static_cast<double>(cv.size());
      double vol = 0.0;
      for (int f : cell_faces[K]) {
        auto [area, centroid] = face_area_centroid_3d(m.face_vertices_[f], m.vertices_);
        Point n = face_normal_3d(m.face_vertices_[f], m.vertices_);
        if ((centroid - mean).dot(n) < 0) n = -n;
        vol += area * (centroid - mean).dot(n) / 3.0;
      }
      m.cell_measures_[K] = vol;
    }
    if (!(m.cell_measures_[K] > 0.0))
      throw DegenerateGeometry("zero measure on " + describe("cell", K));
  }

  // cones, cell-major; interior faces see their first cell's normal negated exactly
  m.cone_offset_.assign(nc + 1, 0);
  for (int K = 0; K < nc; ++K)
    m.cone_offset_[K + 1] = m.cone_offset_[K] + static_cast<int>(cell_faces[K].size());
  int ncones = m.cone_offset_[nc];
  m.cone_cell_.resize(ncones);
  m.cone_face_.resize(ncones);
  m.cone_normals_.resize(ncones);
  m.cone_distances_.resize(ncones);
  m.cone_measures_.resize(ncones);
  m.face_cones_.assign(nf, {-1, -1});
  std::vector<Point> first_normal(nf);
  for (int K = 0, c = 0; K < nc; ++K) {
    Point mean = Point::Zero();
    for (int v : m.cell_vertices_[K]) mean += m.vertices_[v];
    mean /= static_cast<double>(m.cell_vertices_[K].size());
    for (int f : cell_faces[K]) {
      Point n;
      if (m.face_cells_[f][0] == K) {
        if (m.dim_ == 2) {
          const Point& a = m.vertices_[m.face_vertices_[f][0]];
          const Point& b = m.vertices_[m.face_vertices_[f][1]];
          Point e = b - a;
          n = Point(e.y(), -e.x(), 0.0) / e.norm();
        } else {
          n = face_normal_3d(m.face_vertices_[f], m.vertices_);
        }
        if ((m.face_centroids_[f] - mean).dot(n) < 0) n = -n;
        first_normal[f] = n;
        m.face_cones_[f][0] = c;
      } else {
        n = -first_normal[f];
        m.face_cones_[f][1] = c;
      }
      m.cone_cell_[c] = K;
      m.cone_face_[c] = f;
      m.cone_normals_[c] = n;
      m.cone_distances_[c] = (m.face_centroids_[f] - m.cell_points_[K]).dot(n);
      m.cone_measures_[c] =
          m.face_measures_[f] * m.cone_distances_[c] / static_cast<double>(m.dim_);
      ++c;
    }
  }
  // cell-major cone order lists the owning cell first for most faces, but a face's
  // first cell may appear after its second in cell order; fix the slot convention
  for (int f = 0; f < nf; ++f) {
    if (m.face_cones_[f][0] < 0)
      throw NonConformity(describe("face", f) + " not reached from its first cell");
    if (m.face_cells_[f][1] != -1 && m.face_cones_[f][1] < 0)
      throw NonConformity(describe("face", f) + " not reached from its second cell");
  }

  m.interior_index_.assign(nf, -1);
  for (int f = 0; f < nf; ++f) {
    if (m.face_cells_[f][1] != -1) {
      m.interior_index_[f] = static_cast<int>(m.interior_faces_.size());
      m.interior_faces_.push_back(f);
    }
  }

  // domain measure from the boundary (independent of the cell measures)
  double dom = 0.0;
  for (int f = 0; f < nf; ++f) {
    if (m.face_cells_[f][1] != -1) continue;
    int c = m.face_cones_[f][0];
    dom += m.face_measures_[f] * m.face_centroids_[f].dot(m.cone_normals_[c]);
  }
  m.domain_measure_ = dom / static_cast<double>(m.dim_);
  m.domain_diameter_ = (m.dim_ == 2) ? planar_diameter(m.vertices_) : [&] {
    double best = 0.0;
    for (size_t i = 0; i < m.vertices_.size(); ++i)
      for (size_t j = i + 1; j < m.vertices_.size(); ++j)
        best = std::max(best, (m.vertices_[i] - m.vertices_[j]).norm());
    return best;
  }();

  m.validate();
  return m;
}

void AdmissibleMesh::validate() const {
  const int nc = n_cells();
  const int nf = n_faces();

  // cell points strictly inside their cells, with a diameter-relative margin
  for (int K = 0; K < nc; ++K) {
    double margin = 1e-12 * cell_diameters_[K];
    for (int c = cone_begin(K); c < cone_end(K); ++c) {
      double d = cone_distances_[c];
      if (!(d > margin))
        throw PointOutsideCell("cell point of " + describe("cell", K) +
                               " not strictly inside (distance " +
                               std::to_string(d) + ")");
      if (!(d > 0.0))
        throw DegenerateGeometry("nonpositive distance in " + describe("cell", K));
    }
  }

  // interior faces: exact normal antisymmetry and two-point orthogonality
  for (int f = 0; f < nf; ++f) {
    if (face_cells_[f][1] == -1) {
      // boundary: the orthogonal line through x_K must meet the closed face
      int c = face_cones_[f][0];
      const Point& xk = cell_points_[face_cells_[f][0]];
      Point foot = xk + cone_distances_[c] * cone_normals_[c];
      if (dim_ == 2) {
        const Point& a = vertices_[face_vertices_[f][0]];
        const Point& b = vertices_[face_vertices_[f][1]];
        double t = (foot - a).dot(b - a) / (b - a).squaredNorm();
        if (t < -kOrthoTol || t > 1.0 + kOrthoTol)
          throw OrthogonalityViolation("orthogonal line misses boundary " +
                                       describe("face", f));
      }
      continue;
    }
    int c0 = face_cones_[f][0], c1 = face_cones_[f][1];
    if ((cone_normals_[c0] + cone_normals_[c1]).cwiseAbs().maxCoeff() != 0.0)
      throw OrthogonalityViolation("normals not antisymmetric on " + describe("face", f));
    const Point& xk = cell_points_[face_cells_[f][0]];
    const Point& xl = cell_points_[face_cells_[f][1]];
    Point t = xl - xk;
    double ln = t.norm();
    if (!(ln > 0.0))
      throw DegenerateGeometry("coincident cell points across " + describe("face", f));
    double cosang = std::abs(t.dot(cone_normals_[c0])) / ln;
    if (!(cosang >= 1.0 - kOrthoTol))
      throw OrthogonalityViolation("segment not orthogonal to " + describe("face", f) +
                                   " (cos " + std::to_string(cosang) + ")");
  }

  // measure identities
  double sum_cells = std::accumulate(cell_measures_.begin(), cell_measures_.end(), 0.0);
  if (std::abs(sum_cells - domain_measure_) > kRelTol * std::abs(domain_measure_))
    throw DegenerateGeometry("cell measures do not sum to the domain measure");
  // Cone heights and centroid offsets are differences of domain-scale
  // coordinates, so their rounding error is absolute in the domain size, not
  // the cell size; widen the per-cell identity tolerances accordingly.
  for (int K = 0; K < nc; ++K) {
    double sum_cones = 0.0, perimeter = 0.0;
    for (int c = cone_begin(K); c < cone_end(K); ++c) {
      sum_cones += cone_measures_[c];
      perimeter += face_measures_[cone_face_[c]];
    }
    double tol = kRelTol * std::max(cell_measures_[K], perimeter * domain_diameter_);
    if (std::abs(sum_cones - cell_measures_[K]) > tol)
      throw DegenerateGeometry("cone measures do not sum to " + describe("cell", K));
  }

  // first-moment identity sum |sigma| (x_sigma - x_K) n^T = |K| Id
  for (int K = 0; K < nc; ++K) {
    Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
    double perimeter = 0.0;
    for (int c = cone_begin(K); c < cone_end(K); ++c) {
      int f = cone_face_[c];
      perimeter += face_measures_[f];
      s += face_measures_[f] * (face_centroids_[f] - cell_points_[K]) *
           cone_normals_[c].transpose();
    }
    s /= cell_measures_[K];
    double tol = 10 * kRelTol *
                 std::max(1.0, perimeter * domain_diameter_ / cell_measures_[K]);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        if (std::abs(s(i, j) - (i == j ? 1.0 : 0.0)) > tol)
          throw DegenerateGeometry("first-moment identity fails on " + describe("cell", K));
  }
}

MeshQuality AdmissibleMesh::quality() const {
  MeshQuality q;
  for (int K = 0; K < n_cells(); ++K) {
    q.h = std::max(q.h, cell_diameters_[K]);
    for (int c = cone_begin(K); c < cone_end(K); ++c) {
      double ratio = cone_distances_[c] / cell_diameters_[K];
      q.theta = (K == 0 && c == cone_begin(0)) ? ratio : std::min(q.theta, ratio);
    }
  }
  return q;
}

AdmissibleMesh generate_square_grid(int n) {
  if (n < 1) throw DomainError("grid size must be positive");
  RawMesh raw;
  raw.dim = 2;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      raw.vertices.emplace_back(double(i) / n, double(j) / n, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      raw.cell_vertices.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
      raw.cell_points.emplace_back((i + 0.5) / n, (j + 0.5) / n, 0.0);
    }
  }
  return build_mesh(raw);
}

namespace {

/// The 14-triangle acute pattern on the unit square, in integer hundredths.
/// Corners and side midpoints plus an inner rhombus with diagonals along the
/// square diagonals (offsets 17 and 12 hundredths).
struct PatternPoint {
  int x, y;
};
const PatternPoint kA{0, 0}, kB{100, 0}, kC{100, 100}, kD{0, 100};
const PatternPoint kMb{50, 0}, kMr{100, 50}, kMt{50, 100}, kMl{0, 50};
const PatternPoint kBL{33, 33}, kTR{67, 67}, kBR{62, 38}, kTL{38, 62};
const PatternPoint kPattern[14][3] = {
    {kA, kMb, kBL},  {kMb, kBR, kBL}, {kMb, kB, kBR}, {kB, kMr, kBR},
    {kMr, kTR, kBR}, {kMr, kC, kTR},  {kC, kMt, kTR}, {kMt, kTL, kTR},
    {kMt, kD, kTL},  {kD, kMl, kTL},  {kMl, kBL, kTL}, {kMl, kA, kBL},
    {kBL, kBR, kTL}, {kBR, kTR, kTL}};

}  // namespace

AdmissibleMesh generate_acute_triangular_grid(int n) {
  if (n < 1) throw DomainError("grid size must be positive");
  // circumcenters of the unit pattern, then guard acuteness with a margin
  Point pattern_cc[14];
  for (int t = 0; t < 14; ++t) {
    Point p[3];
    for (int v = 0; v < 3; ++v)
      p[v] = Point(kPattern[t][v].x / 100.0, kPattern[t][v].y / 100.0, 0.0);
    Point cc = circumcenter(p[0], p[1], p[2]);
    for (int e = 0; e < 3; ++e) {
      Point a = p[e], b = p[(e + 1) % 3], o = p[(e + 2) % 3];
      Point edge = b - a;
      Point nrm(edge.y(), -edge.x(), 0.0);
      nrm /= nrm.norm();
      if ((o - a).dot(nrm) > 0) nrm = -nrm;
      if (!((a - cc).dot(nrm) > 1e-3))
        throw NonAcutePattern("circumcenter too close to an edge of pattern triangle " +
                              std::to_string(t));
    }
    pattern_cc[t] = cc;
  }

  RawMesh raw;
  raw.dim = 2;
  std::map<std::pair<int, int>, int> vid;
  auto vertex_id = [&](int gx, int gy) {
    auto key = std::make_pair(gx, gy);
    auto it = vid.find(key);
    if (it != vid.end()) return it->second;
    int id = static_cast<int>(raw.vertices.size());
    raw.vertices.emplace_back(gx / (100.0 * n), gy / (100.0 * n), 0.0);
    vid[key] = id;
    return id;
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < 14; ++t) {
        std::vector<int> tri(3);
        for (int v = 0; v < 3; ++v)
          tri[v] = vertex_id(100 * i + kPattern[t][v].x, 100 * j + kPattern[t][v].y);
        raw.cell_vertices.push_back(tri);
        raw.cell_points.emplace_back((i + pattern_cc[t].x()) / n,
                                     (j + pattern_cc[t].y()) / n, 0.0);
      }
    }
  }
  return build_mesh(raw);
}

AdmissibleMesh raw_to_mesh_with_circumcenters(RawMesh raw) {
  raw.cell_points.clear();
  raw.cell_points.reserve(raw.cell_vertices.size());
  for (const auto& tri : raw.cell_vertices) {
    if (tri.size() != 3) throw ParseError("triangle reader got a non-triangle cell");
    raw.cell_points.push_back(circumcenter(raw.vertices[tri[0]], raw.vertices[tri[1]],
                                           raw.vertices[tri[2]]));
  }
  return build_mesh(raw);
}

}  // namespace tpfa

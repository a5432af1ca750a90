#ifndef TPFA_MESH_HPP
#define TPFA_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "tpfa/errors.hpp"

namespace tpfa {

/// Points are stored with three coordinates; planar meshes use z = 0
using Point = Eigen::Vector3d;

/// Raw input for mesh construction: vertices, cell-vertex lists, one point per cell.
/// Faces may be listed explicitly (required for dim == 3); in the plane they are
/// derived from consecutive vertices of each convex cell.
struct RawMesh {
  struct Face {
    std::vector<int> vertices;
    int cell_a = -1;
    int cell_b = -1;  ///< -1 on the boundary
  };
  int dim = 2;
  std::vector<Point> vertices;
  std::vector<std::vector<int>> cell_vertices;
  std::vector<Point> cell_points;
  std::vector<Face> faces;  ///< optional; derived when empty (dim == 2 only)
};

/// Mesh size and regularity: h = max cell diameter, theta = min d_{K,sigma}/diam(K)
struct MeshQuality {
  double h = 0.0;
  double theta = 0.0;
};

/// Validated admissible mesh: convex cells, one interior point per cell, and for
/// every interior face the segment joining the two cell points orthogonal to it.
/// Geometry is precomputed per cell, per face and per half-diamond ("cone")
/// D_{K,sigma}, the pyramid with apex x_K over the face sigma.
class AdmissibleMesh {
 public:
  int dim() const { return dim_; }
  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cell_points_.size()); }
  int n_faces() const { return static_cast<int>(face_measures_.size()); }
  int n_interior_faces() const { return static_cast<int>(interior_faces_.size()); }
  int n_cones() const { return static_cast<int>(cone_face_.size()); }

  const Point& vertex(int v) const { return vertices_[v]; }
  const std::vector<int>& cell_vertices(int K) const { return cell_vertices_[K]; }
  const Point& cell_point(int K) const { return cell_points_[K]; }
  double cell_measure(int K) const { return cell_measures_[K]; }
  double cell_diameter(int K) const { return cell_diameters_[K]; }

  const std::vector<int>& face_vertices(int f) const { return face_vertices_[f]; }
  double face_measure(int f) const { return face_measures_[f]; }
  const Point& face_centroid(int f) const { return face_centroids_[f]; }
  /// Cells on each side of the face; second entry -1 on the boundary
  const std::array<int, 2>& face_cells(int f) const { return face_cells_[f]; }
  bool is_boundary_face(int f) const { return face_cells_[f][1] < 0; }
  /// Position of an interior face in the interior enumeration, -1 if boundary
  int interior_index(int f) const { return interior_index_[f]; }
  int interior_face(int i) const { return interior_faces_[i]; }

  /// Cones of cell K occupy [cone_begin(K), cone_end(K))
  int cone_begin(int K) const { return cone_offset_[K]; }
  int cone_end(int K) const { return cone_offset_[K + 1]; }
  int cone_cell(int c) const { return cone_cell_[c]; }
  int cone_face(int c) const { return cone_face_[c]; }
  /// Unit normal of the cone's face, outward from the cone's cell
  const Point& cone_normal(int c) const { return cone_normals_[c]; }
  /// Orthogonal distance d_{K,sigma} from the cell point to the face plane
  double cone_distance(int c) const { return cone_distances_[c]; }
  /// |D_{K,sigma}| = |sigma| d_{K,sigma} / dim
  double cone_measure(int c) const { return cone_measures_[c]; }
  /// Cones incident to a face; second entry -1 on the boundary
  const std::array<int, 2>& face_cones(int f) const { return face_cones_[f]; }

  double domain_measure() const { return domain_measure_; }
  double domain_diameter() const { return domain_diameter_; }

  MeshQuality quality() const;

  /// Re-runs every admissibility invariant; throws on violation
  void validate() const;

 private:
  friend AdmissibleMesh build_mesh(const RawMesh& raw);

  int dim_ = 2;
  std::vector<Point> vertices_;
  std::vector<std::vector<int>> cell_vertices_;
  std::vector<Point> cell_points_;
  std::vector<double> cell_measures_;
  std::vector<double> cell_diameters_;

  std::vector<std::vector<int>> face_vertices_;
  std::vector<double> face_measures_;
  std::vector<Point> face_centroids_;
  std::vector<std::array<int, 2>> face_cells_;
  std::vector<int> interior_index_;
  std::vector<int> interior_faces_;

  std::vector<int> cone_offset_;
  std::vector<int> cone_cell_;
  std::vector<int> cone_face_;
  std::vector<Point> cone_normals_;
  std::vector<double> cone_distances_;
  std::vector<double> cone_measures_;
  std::vector<std::array<int, 2>> face_cones_;

  double domain_measure_ = 0.0;
  double domain_diameter_ = 0.0;
};

/// Builds and validates an admissible mesh from raw data
AdmissibleMesh build_mesh(const RawMesh& raw);

/// n x n uniform grid of unit-square cells on (0,1)^2 with centered cell points
AdmissibleMesh generate_square_grid(int n);

/// Structured acute triangulation of (0,1)^2 with circumcenter cell points:
/// each of the n x n squares carries 14 acute triangles (sides split at their
/// midpoints, inner rhombus aligned with the square diagonals), so that every
/// circumcenter is strictly interior and the tiling is conforming.
AdmissibleMesh generate_acute_triangular_grid(int n);

/// Reads the native whitespace-separated text format ('#' starts a comment):
///   line 1: d nv nc nf
///   nv vertex lines: d coordinates
///   nc cell lines:   k v1 .. vk p1 .. pd
///   nf face lines:   m v1 .. vm c1 c2   (c2 = -1 on the boundary)
AdmissibleMesh read_mesh(std::istream& in);
AdmissibleMesh read_mesh_file(const std::string& path);

/// Writes the native format with round-trip decimal precision
void write_mesh(const AdmissibleMesh& mesh, std::ostream& out);

/// Reads a keyword-based planar triangle file ("vertices" count and coordinate
/// lines, then "triangles"/"cells" count and index lines, 1-based indices);
/// cell points are the circumcenters.
AdmissibleMesh read_fvca_triangles(std::istream& in);
AdmissibleMesh read_fvca_triangles_file(const std::string& path);

}  // namespace tpfa

#endif

#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tpfa/format.hpp"
#include "tpfa/mesh.hpp"

namespace tpfa {

AdmissibleMesh raw_to_mesh_with_circumcenters(RawMesh raw);

namespace {

/// Whitespace tokens with line tracking; '#' starts a comment
class TokenStream {
 public:
  explicit TokenStream(std::istream& in) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.emplace_back(tok, number);
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  int line() const {
    return pos_ < tokens_.size() ? tokens_[pos_].second
                                 : (tokens_.empty() ? 0 : tokens_.back().second);
  }

  std::string next(const char* what) {
    if (done())
      throw ParseError(std::string("unexpected end of file, expected ") + what);
    return tokens_[pos_++].first;
  }

  long integer(const char* what) {
    std::string tok = next(what);
    size_t used = 0;
    long value = 0;
    try {
      value = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      throw ParseError(std::string("line ") + std::to_string(line_of_last()) +
                       ": expected integer " + what + ", got '" + tok + "'");
    return value;
  }

  double real(const char* what) {
    std::string tok = next(what);
    size_t used = 0;
    double value = 0;
    try {
      value = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      throw ParseError(std::string("line ") + std::to_string(line_of_last()) +
                       ": expected number " + what + ", got '" + tok + "'");
    return value;
  }

 private:
  int line_of_last() const { return tokens_[pos_ - 1].second; }
  std::vector<std::pair<std::string, int>> tokens_;
  size_t pos_ = 0;
};

}  // namespace

AdmissibleMesh read_mesh(std::istream& in) {
  TokenStream ts(in);
  RawMesh raw;
  raw.dim = static_cast<int>(ts.integer("dimension"));
  long nv = ts.integer("vertex count");
  long nc = ts.integer("cell count");
  long nf = ts.integer("face count");
  if (raw.dim != 2 && raw.dim != 3) throw ParseError("dimension must be 2 or 3");
  if (nv < raw.dim + 1 || nc < 1 || nf < raw.dim + 1)
    throw ParseError("implausible counts in header");
  raw.vertices.reserve(nv);
  for (long v = 0; v < nv; ++v) {
    Point p = Point::Zero();
    for (int k = 0; k < raw.dim; ++k) p[k] = ts.real("vertex coordinate");
    raw.vertices.push_back(p);
  }
  for (long cidx = 0; cidx < nc; ++cidx) {
    long k = ts.integer("cell vertex count");
    if (k < raw.dim + 1) throw ParseError("cell with too few vertices");
    std::vector<int> cv(k);
    for (long i = 0; i < k; ++i) cv[i] = static_cast<int>(ts.integer("cell vertex"));
    raw.cell_vertices.push_back(std::move(cv));
    Point p = Point::Zero();
    for (int i = 0; i < raw.dim; ++i) p[i] = ts.real("cell point coordinate");
    raw.cell_points.push_back(p);
  }
  for (long fidx = 0; fidx < nf; ++fidx) {
    long mlen = ts.integer("face vertex count");
    if (mlen < raw.dim) throw ParseError("face with too few vertices");
    RawMesh::Face face;
    face.vertices.resize(mlen);
    for (long i = 0; i < mlen; ++i)
      face.vertices[i] = static_cast<int>(ts.integer("face vertex"));
    face.cell_a = static_cast<int>(ts.integer("face cell"));
    face.cell_b = static_cast<int>(ts.integer("face cell"));
    raw.faces.push_back(std::move(face));
  }
  if (!ts.done())
    throw ParseError("line " + std::to_string(ts.line()) + ": trailing tokens");
  return build_mesh(raw);
}

AdmissibleMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(const AdmissibleMesh& mesh, std::ostream& out) {
  const int d = mesh.dim();
  out << d << " " << mesh.n_vertices() << " " << mesh.n_cells() << " "
      << mesh.n_faces() << "\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    for (int k = 0; k < d; ++k)
      out << (k ? " " : "") << format_full(mesh.vertex(v)[k]);
    out << "\n";
  }
  for (int K = 0; K < mesh.n_cells(); ++K) {
    const auto& cv = mesh.cell_vertices(K);
    out << cv.size();
    for (int v : cv) out << " " << v;
    for (int k = 0; k < d; ++k) out << " " << format_full(mesh.cell_point(K)[k]);
    out << "\n";
  }
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& fv = mesh.face_vertices(f);
    out << fv.size();
    for (int v : fv) out << " " << v;
    out << " " << mesh.face_cells(f)[0] << " " << mesh.face_cells(f)[1] << "\n";
  }
}

AdmissibleMesh read_fvca_triangles(std::istream& in) {
  TokenStream ts(in);
  RawMesh raw;
  raw.dim = 2;
  auto lowered = [](std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
  };
  bool have_vertices = false, have_triangles = false;
  while (!ts.done() && !(have_vertices && have_triangles)) {
    std::string word = lowered(ts.next("keyword"));
    if (!have_vertices && word == "vertices") {
      long nv = ts.integer("vertex count");
      if (nv < 3) throw ParseError("implausible vertex count");
      for (long v = 0; v < nv; ++v) {
        double x = ts.real("vertex x");
        double y = ts.real("vertex y");
        raw.vertices.emplace_back(x, y, 0.0);
      }
      have_vertices = true;
    } else if (!have_triangles && (word == "triangles" || word == "cells")) {
      long nt = ts.integer("triangle count");
      if (nt < 1) throw ParseError("implausible triangle count");
      for (long t = 0; t < nt; ++t) {
        std::vector<int> tri(3);
        for (int i = 0; i < 3; ++i)
          tri[i] = static_cast<int>(ts.integer("triangle vertex")) - 1;
        raw.cell_vertices.push_back(std::move(tri));
      }
      have_triangles = true;
    }
  }
  if (!have_vertices || !have_triangles)
    throw ParseError("triangle file without vertices/triangles sections");
  return raw_to_mesh_with_circumcenters(std::move(raw));
}

AdmissibleMesh read_fvca_triangles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path);
  return read_fvca_triangles(in);
}

}  // namespace tpfa

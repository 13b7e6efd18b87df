#include "icefem/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "icefem/errors.hpp"

namespace icefem {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

// Strictly between a and b on the segment, with a small relative slack.
bool point_on_open_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return false;
  double t = dot(p - a, ab) / len2;
  double eps = 1e-12;
  if (t <= eps || t >= 1.0 - eps) return false;
  Vec2 foot = a + t * ab;
  return norm(p - foot) <= 1e-12 * std::sqrt(len2);
}

}  // namespace

int Triangulation::n_boundary_edges() const {
  int n = 0;
  for (int e = 0; e < n_edges(); ++e)
    if (is_boundary_edge(e)) ++n;
  return n;
}

double Triangulation::cell_area(int c) const {
  const auto& v = cells[c];
  return signed_area(points[v[0]], points[v[1]], points[v[2]]);
}

double Triangulation::total_area() const {
  double a = 0.0;
  for (int c = 0; c < n_cells(); ++c) a += cell_area(c);
  return a;
}

double Triangulation::h_max() const {
  double h = 0.0;
  for (int e = 0; e < n_edges(); ++e) h = std::max(h, edge_length(e));
  return h;
}

Vec2 Triangulation::cell_centroid(int c) const {
  const auto& v = cells[c];
  return (1.0 / 3.0) * (points[v[0]] + points[v[1]] + points[v[2]]);
}

AffineMap Triangulation::cell_map(int c) const {
  const auto& v = cells[c];
  return make_affine_map(points[v[0]], points[v[1]], points[v[2]]);
}

Vec2 Triangulation::edge_midpoint(int e) const {
  return 0.5 * (points[edges[e][0]] + points[edges[e][1]]);
}

double Triangulation::edge_length(int e) const {
  return norm(points[edges[e][1]] - points[edges[e][0]]);
}

Vec2 Triangulation::edge_normal(int e) const {
  Vec2 t = points[edges[e][1]] - points[edges[e][0]];
  double l = norm(t);
  return {t.y / l, -t.x / l};
}

Triangulation build_triangulation(std::vector<Vec2> points,
                                  std::vector<std::array<int, 3>> cells,
                                  const BoundaryTagger& tagger) {
  Triangulation tri;
  const int np = static_cast<int>(points.size());

  for (auto& cell : cells) {
    for (int v : cell)
      if (v < 0 || v >= np) throw MeshError("cell references invalid point index");
    double a = signed_area(points[cell[0]], points[cell[1]], points[cell[2]]);
    if (a < 0.0) {
      std::swap(cell[1], cell[2]);  // clockwise input, reorient
      a = -a;
    }
    if (!(a > 0.0)) throw MeshError("degenerate or negatively oriented cell");
  }

  tri.points = std::move(points);
  tri.cells = std::move(cells);

  // Deterministic edge enumeration: (lo,hi) pairs in lexicographic order.
  std::vector<std::array<int, 2>> all_edges;
  all_edges.reserve(tri.cells.size() * 3);
  for (const auto& cell : tri.cells) {
    for (int i = 0; i < 3; ++i) {
      int a = cell[(i + 1) % 3], b = cell[(i + 2) % 3];
      all_edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(all_edges.begin(), all_edges.end());
  all_edges.erase(std::unique(all_edges.begin(), all_edges.end()), all_edges.end());
  tri.edges = std::move(all_edges);

  std::map<std::array<int, 2>, int> edge_index;
  for (int e = 0; e < tri.n_edges(); ++e) edge_index[tri.edges[e]] = e;

  tri.cell_edges.resize(tri.cells.size());
  tri.cell_edge_signs.resize(tri.cells.size());
  tri.edge_cells.assign(tri.edges.size(), {-1, -1});

  for (int c = 0; c < tri.n_cells(); ++c) {
    const auto& cell = tri.cells[c];
    for (int i = 0; i < 3; ++i) {
      int a = cell[(i + 1) % 3], b = cell[(i + 2) % 3];
      int e = edge_index.at({std::min(a, b), std::max(a, b)});
      tri.cell_edges[c][i] = e;
      tri.cell_edge_signs[c][i] = a < b ? 1 : -1;
      auto& adj = tri.edge_cells[e];
      if (adj[0] < 0)
        adj[0] = c;
      else if (adj[1] < 0)
        adj[1] = c;
      else
        throw MeshError("non-conforming mesh: edge shared by more than two cells");
    }
  }

  // Two counterclockwise cells must traverse a shared edge in opposite
  // directions; equal signs mean overlapping or inconsistent input.
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (tri.edge_cells[e][1] < 0) continue;
    int s0 = 0, s1 = 0;
    for (int k = 0; k < 2; ++k) {
      int c = tri.edge_cells[e][k];
      for (int i = 0; i < 3; ++i)
        if (tri.cell_edges[c][i] == e)
          (k == 0 ? s0 : s1) = tri.cell_edge_signs[c][i];
    }
    if (s0 == s1) throw MeshError("non-conforming mesh: inconsistent edge orientation");
  }

  // Hanging nodes make interior edges look like boundary edges; catch them
  // by testing boundary edges against all points.
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!tri.is_boundary_edge(e)) continue;
    const Vec2& a = tri.points[tri.edges[e][0]];
    const Vec2& b = tri.points[tri.edges[e][1]];
    for (int p = 0; p < np; ++p) {
      if (p == tri.edges[e][0] || p == tri.edges[e][1]) continue;
      if (point_on_open_segment(tri.points[p], a, b))
        throw MeshError("non-conforming mesh: hanging node on boundary edge");
    }
  }

  tri.edge_tag.assign(tri.edges.size(), -1);
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!tri.is_boundary_edge(e)) continue;
    BoundaryTag tag = tagger(tri.points[tri.edges[e][0]], tri.points[tri.edges[e][1]]);
    tri.edge_tag[e] = static_cast<int>(tag);
  }
  return tri;
}

Triangulation uniform_refine(const Triangulation& tri) {
  std::vector<Vec2> points = tri.points;
  points.reserve(points.size() + tri.edges.size());
  std::vector<int> edge_mid(tri.n_edges());
  for (int e = 0; e < tri.n_edges(); ++e) {
    edge_mid[e] = static_cast<int>(points.size());
    points.push_back(tri.edge_midpoint(e));
  }

  std::vector<std::array<int, 3>> cells;
  cells.reserve(tri.cells.size() * 4);
  for (int c = 0; c < tri.n_cells(); ++c) {
    const auto& v = tri.cells[c];
    int m0 = edge_mid[tri.cell_edges[c][0]];
    int m1 = edge_mid[tri.cell_edges[c][1]];
    int m2 = edge_mid[tri.cell_edges[c][2]];
    cells.push_back({v[0], m2, m1});
    cells.push_back({v[1], m0, m2});
    cells.push_back({v[2], m1, m0});
    cells.push_back({m0, m1, m2});
  }

  // A child boundary edge joins a parent boundary-edge midpoint with one of
  // its endpoints; look the tag up there.
  std::map<std::array<int, 2>, int> parent_tag;
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!tri.is_boundary_edge(e)) continue;
    int a = tri.edges[e][0], b = tri.edges[e][1], m = edge_mid[e];
    parent_tag[{std::min(a, m), std::max(a, m)}] = tri.edge_tag[e];
    parent_tag[{std::min(b, m), std::max(b, m)}] = tri.edge_tag[e];
  }
  auto tagger = [&](const Vec2&, const Vec2&) { return BoundaryTag::Dirichlet; };
  Triangulation fine = build_triangulation(std::move(points), std::move(cells), tagger);
  for (int e = 0; e < fine.n_edges(); ++e) {
    if (!fine.is_boundary_edge(e)) continue;
    auto it = parent_tag.find(fine.edges[e]);
    if (it == parent_tag.end())
      throw MeshError("refinement produced a boundary edge outside the parent boundary");
    fine.edge_tag[e] = it->second;
  }
  return fine;
}

Submesh active_subdomain(const Triangulation& tri,
                         const std::vector<double>& h_values, double h_min) {
  if (static_cast<int>(h_values.size()) != tri.n_cells())
    throw MeshError("active_subdomain: one thickness value per cell required");
  std::vector<char> keep(tri.n_cells(), 0);
  int n_keep = 0;
  for (int c = 0; c < tri.n_cells(); ++c) {
    if (h_values[c] < 0.0) throw MeshError("active_subdomain: negative ice thickness");
    if (h_values[c] >= h_min) {
      keep[c] = 1;
      ++n_keep;
    }
  }
  if (n_keep == 0) throw MeshError("empty active set");

  Submesh sub;
  // Compact points in parent order so the relative order of edge endpoints
  // (and with it every RT sign) is stable across reactivations.
  std::vector<int> point_new(tri.n_points(), -1);
  std::vector<char> used(tri.n_points(), 0);
  for (int c = 0; c < tri.n_cells(); ++c)
    if (keep[c])
      for (int p : tri.cells[c]) used[p] = 1;
  for (int p = 0; p < tri.n_points(); ++p) {
    if (!used[p]) continue;
    point_new[p] = static_cast<int>(sub.point_parent.size());
    sub.point_parent.push_back(p);
  }
  std::vector<std::array<int, 3>> cells;
  for (int c = 0; c < tri.n_cells(); ++c) {
    if (!keep[c]) continue;
    cells.push_back({point_new[tri.cells[c][0]], point_new[tri.cells[c][1]],
                     point_new[tri.cells[c][2]]});
    sub.cell_parent.push_back(c);
  }
  std::vector<Vec2> points(sub.point_parent.size());
  for (size_t i = 0; i < sub.point_parent.size(); ++i)
    points[i] = tri.points[sub.point_parent[i]];

  // Parent vertex order is preserved within the compacted numbering, so the
  // relative order of edge endpoints (and with it every RT sign) is stable.
  sub.mesh = build_triangulation(std::move(points), std::move(cells), all_neumann());

  std::map<std::array<int, 2>, int> parent_edge;
  for (int e = 0; e < tri.n_edges(); ++e) parent_edge[tri.edges[e]] = e;

  sub.edge_parent.resize(sub.mesh.n_edges());
  for (int e = 0; e < sub.mesh.n_edges(); ++e) {
    int a = sub.point_parent[sub.mesh.edges[e][0]];
    int b = sub.point_parent[sub.mesh.edges[e][1]];
    auto it = parent_edge.find({std::min(a, b), std::max(a, b)});
    if (it == parent_edge.end()) throw MeshError("active_subdomain: lost parent edge");
    sub.edge_parent[e] = it->second;
    if (sub.mesh.is_boundary_edge(e)) {
      int ptag = tri.edge_tag[it->second];
      sub.mesh.edge_tag[e] =
          ptag >= 0 ? ptag : static_cast<int>(BoundaryTag::Neumann);
    }
  }
  return sub;
}

Triangulation square_grid(int nx, int ny, double lx, double ly,
                          const BoundaryTagger& tagger) {
  if (nx < 1 || ny < 1) throw MeshError("square_grid: need at least one cell per side");
  std::vector<Vec2> points;
  points.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      points.push_back({lx * i / nx, ly * j / ny});
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j);
      int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }
  return build_triangulation(std::move(points), std::move(cells), tagger);
}

BoundaryTagger rectangle_side_tagger(double lx, double ly, BoundaryTag left,
                                     BoundaryTag right, BoundaryTag bottom,
                                     BoundaryTag top) {
  return [=](const Vec2& a, const Vec2& b) {
    Vec2 m = 0.5 * (a + b);
    double tol = 1e-10 * std::max(lx, ly);
    if (std::abs(m.x) <= tol) return left;
    if (std::abs(m.x - lx) <= tol) return right;
    if (std::abs(m.y) <= tol) return bottom;
    if (std::abs(m.y - ly) <= tol) return top;
    throw MeshError("boundary edge not on any rectangle side");
  };
}

namespace {

std::string next_content_line(std::istream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    size_t end = line.find_last_not_of(" \t\r");
    return line.substr(start, end - start + 1);
  }
  return {};
}

}  // namespace

Triangulation read_mesh(std::istream& in) {
  int lineno = 0;
  std::string line = next_content_line(in, lineno);
  if (line != "mesh2d 1")
    throw IoError("mesh file: expected header 'mesh2d 1' at line " + std::to_string(lineno));

  auto expect_section = [&](const char* name) -> int {
    std::string l = next_content_line(in, lineno);
    std::istringstream ss(l);
    std::string word;
    int count = -1;
    ss >> word >> count;
    if (word != name || count < 0 || !ss || !(ss >> std::ws).eof())
      throw IoError(std::string("mesh file: expected '") + name + " N' at line " +
                    std::to_string(lineno));
    return count;
  };

  int np = expect_section("points");
  std::vector<Vec2> points(np);
  for (int i = 0; i < np; ++i) {
    std::istringstream ss(next_content_line(in, lineno));
    if (!(ss >> points[i].x >> points[i].y) || !(ss >> std::ws).eof())
      throw IoError("mesh file: malformed point at line " + std::to_string(lineno));
  }

  int nc = expect_section("cells");
  std::vector<std::array<int, 3>> cells(nc);
  for (int i = 0; i < nc; ++i) {
    std::istringstream ss(next_content_line(in, lineno));
    if (!(ss >> cells[i][0] >> cells[i][1] >> cells[i][2]) || !(ss >> std::ws).eof())
      throw IoError("mesh file: malformed cell at line " + std::to_string(lineno));
  }

  int nb = expect_section("boundary");
  std::map<std::array<int, 2>, BoundaryTag> tags;
  for (int i = 0; i < nb; ++i) {
    std::istringstream ss(next_content_line(in, lineno));
    int a, b;
    std::string tag;
    if (!(ss >> a >> b >> tag) || !(ss >> std::ws).eof() || (tag != "D" && tag != "N"))
      throw IoError("mesh file: malformed boundary edge at line " + std::to_string(lineno));
    tags[{std::min(a, b), std::max(a, b)}] =
        tag == "D" ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
  }

  std::string rest = next_content_line(in, lineno);
  if (!rest.empty())
    throw IoError("mesh file: unrecognized line " + std::to_string(lineno) + ": '" + rest + "'");

  auto tagger = [&](const Vec2&, const Vec2&) { return BoundaryTag::Dirichlet; };
  Triangulation tri = build_triangulation(std::move(points), std::move(cells), tagger);
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!tri.is_boundary_edge(e)) continue;
    auto it = tags.find(tri.edges[e]);
    if (it == tags.end())
      throw IoError("mesh file: untagged boundary edge (" +
                    std::to_string(tri.edges[e][0]) + ", " +
                    std::to_string(tri.edges[e][1]) + ")");
    tri.edge_tag[e] = static_cast<int>(it->second);
    tags.erase(it);
  }
  if (!tags.empty())
    throw IoError("mesh file: boundary list names an edge that is not a boundary edge");
  return tri;
}

Triangulation read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Triangulation& tri) {
  char buf[128];
  out << "mesh2d 1\n";
  out << "points " << tri.n_points() << "\n";
  for (const auto& p : tri.points) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out << buf;
  }
  out << "cells " << tri.n_cells() << "\n";
  for (const auto& c : tri.cells)
    out << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "boundary " << tri.n_boundary_edges() << "\n";
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!tri.is_boundary_edge(e)) continue;
    out << tri.edges[e][0] << " " << tri.edges[e][1] << " "
        << (tri.edge_tag[e] == static_cast<int>(BoundaryTag::Dirichlet) ? "D" : "N")
        << "\n";
  }
}

void write_mesh_file(const std::string& path, const Triangulation& tri) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_mesh(out, tri);
  if (!out) throw IoError("failed writing mesh file '" + path + "'");
}

}  // namespace icefem

#ifndef ICEFEM_MESH_HPP
#define ICEFEM_MESH_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "icefem/geometry.hpp"

namespace icefem {

enum class BoundaryTag : int { Dirichlet = 0, Neumann = 1 };

/// Conforming triangulation with globally oriented edges.
///
/// Edges are stored with the lower vertex index first and enumerated in
/// lexicographic order, so connectivity is independent of cell ordering.
/// Local edge i of a cell is the edge opposite local vertex i.  The sign of
/// a local edge is +1 when the cell traverses it from the lower to the
/// higher global vertex index (for counterclockwise cells this means the
/// outward normal coincides with the global edge normal).
struct Triangulation {
  std::vector<Vec2> points;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> cell_edges;
  std::vector<std::array<int, 3>> cell_edge_signs;
  std::vector<std::array<int, 2>> edge_cells;  // second entry -1 on the boundary
  std::vector<int> edge_tag;                   // -1 interior, else BoundaryTag

  int n_points() const { return static_cast<int>(points.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  bool is_boundary_edge(int e) const { return edge_cells[e][1] < 0; }
  int n_boundary_edges() const;

  double cell_area(int c) const;
  double total_area() const;
  /// Longest edge in the mesh.
  double h_max() const;
  Vec2 cell_centroid(int c) const;
  AffineMap cell_map(int c) const;
  Vec2 edge_midpoint(int e) const;
  double edge_length(int e) const;
  /// Unit normal of the global edge orientation (lower -> higher vertex).
  Vec2 edge_normal(int e) const;
};

using BoundaryTagger = std::function<BoundaryTag(const Vec2& a, const Vec2& b)>;

/// Builds a conforming triangulation.  Clockwise cells are reoriented;
/// zero-area cells, non-conforming connectivity and untagged boundary
/// edges are errors.
Triangulation build_triangulation(std::vector<Vec2> points,
                                  std::vector<std::array<int, 3>> cells,
                                  const BoundaryTagger& tagger);

/// Red refinement: each cell is split into 4 similar children through the
/// edge midpoints.  Child boundary edges inherit the parent tag.
Triangulation uniform_refine(const Triangulation& tri);

/// Submesh with entity maps back to the parent triangulation.
struct Submesh {
  Triangulation mesh;
  std::vector<int> cell_parent;
  std::vector<int> point_parent;
  std::vector<int> edge_parent;
};

/// Restriction to the cells with h >= h_min.  Boundary edges uncovered by
/// the removal are tagged Neumann; retained original boundary edges keep
/// their tag.  Throws on an empty active set.
Submesh active_subdomain(const Triangulation& tri,
                         const std::vector<double>& h_values, double h_min);

/// Structured n x m grid on [0,lx] x [0,ly], each square split by the
/// diagonal of positive slope.
Triangulation square_grid(int nx, int ny, double lx, double ly,
                          const BoundaryTagger& tagger);

/// Tagger assigning one tag per side of an axis-aligned rectangle
/// [0,lx] x [0,ly]; order left, right, bottom, top.
BoundaryTagger rectangle_side_tagger(double lx, double ly, BoundaryTag left,
                                     BoundaryTag right, BoundaryTag bottom,
                                     BoundaryTag top);
inline BoundaryTagger all_dirichlet() {
  return [](const Vec2&, const Vec2&) { return BoundaryTag::Dirichlet; };
}
inline BoundaryTagger all_neumann() {
  return [](const Vec2&, const Vec2&) { return BoundaryTag::Neumann; };
}

// Line-based mesh file format, see README.
Triangulation read_mesh(std::istream& in);
Triangulation read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Triangulation& tri);
void write_mesh_file(const std::string& path, const Triangulation& tri);

}  // namespace icefem

#endif

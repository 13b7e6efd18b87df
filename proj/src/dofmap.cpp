#include "icefem/dofmap.hpp"

#include "icefem/elements.hpp"
#include "icefem/errors.hpp"

namespace icefem {

namespace {

DofMap build_lagrange(int k, BoundaryTag tag, const Triangulation& tri) {
  if (k != 1 && k != 2) throw Error("build_dofmap: Lagrange order must be 1 or 2");
  const int nv = tri.n_points();
  const int n_nodes = k == 1 ? nv : nv + tri.n_edges();
  DofMap map;
  map.n_dofs = 2 * n_nodes;
  map.dofs_per_cell = 2 * lagrange_size(k);
  map.cell_dofs.resize(static_cast<size_t>(tri.n_cells()) * map.dofs_per_cell);
  map.cell_signs.assign(map.cell_dofs.size(), 1.0);

  for (int c = 0; c < tri.n_cells(); ++c) {
    int base = c * map.dofs_per_cell;
    for (int i = 0; i < 3; ++i) {
      int node = tri.cells[c][i];
      map.cell_dofs[base + 2 * i] = 2 * node;
      map.cell_dofs[base + 2 * i + 1] = 2 * node + 1;
    }
    if (k == 2) {
      for (int i = 0; i < 3; ++i) {
        int node = nv + tri.cell_edges[c][i];
        map.cell_dofs[base + 6 + 2 * i] = 2 * node;
        map.cell_dofs[base + 6 + 2 * i + 1] = 2 * node + 1;
      }
    }
  }

  map.constrained.assign(map.n_dofs, 0);
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (tri.edge_tag[e] != static_cast<int>(tag)) continue;
    int nodes[3] = {tri.edges[e][0], tri.edges[e][1], k == 2 ? nv + e : -1};
    for (int node : nodes) {
      if (node < 0) continue;
      map.constrained[2 * node] = 1;
      map.constrained[2 * node + 1] = 1;
    }
  }
  for (char c : map.constrained) map.n_constrained += c;
  return map;
}

DofMap build_rt_row(int l, BoundaryTag tag, const Triangulation& tri) {
  if (l != 0 && l != 1) throw Error("build_dofmap: RT order must be 0 or 1");
  const int nm = rt_edge_moments(l);
  const int ne = tri.n_edges();
  DofMap map;
  map.n_dofs = nm * ne + (l == 1 ? 2 * tri.n_cells() : 0);
  map.dofs_per_cell = rt_size(l);
  map.cell_dofs.resize(static_cast<size_t>(tri.n_cells()) * map.dofs_per_cell);
  map.cell_signs.assign(map.cell_dofs.size(), 1.0);

  for (int c = 0; c < tri.n_cells(); ++c) {
    int base = c * map.dofs_per_cell;
    for (int i = 0; i < 3; ++i) {
      int e = tri.cell_edges[c][i];
      double orient = static_cast<double>(tri.cell_edge_signs[c][i]);
      for (int m = 0; m < nm; ++m) {
        map.cell_dofs[base + nm * i + m] = nm * e + m;
        // The orientation flip of the linear moment weight cancels the
        // normal flip, so only the constant moment changes sign.
        map.cell_signs[base + nm * i + m] = m == 0 ? orient : 1.0;
      }
    }
    if (l == 1) {
      map.cell_dofs[base + 6] = nm * ne + 2 * c;
      map.cell_dofs[base + 7] = nm * ne + 2 * c + 1;
    }
  }

  map.constrained.assign(map.n_dofs, 0);
  for (int e = 0; e < ne; ++e) {
    if (tri.edge_tag[e] != static_cast<int>(tag)) continue;
    for (int m = 0; m < nm; ++m) map.constrained[nm * e + m] = 1;
  }
  for (char c : map.constrained) map.n_constrained += c;
  return map;
}

}  // namespace

DofMap build_dofmap(const SpaceDescriptor& space, const Triangulation& tri) {
  if (space.kind == SpaceKind::VectorLagrange)
    return build_lagrange(space.order, space.constrained_tag, tri);
  return build_rt_row(space.order, space.constrained_tag, tri);
}

}  // namespace icefem

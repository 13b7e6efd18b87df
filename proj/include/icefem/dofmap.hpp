#ifndef ICEFEM_DOFMAP_HPP
#define ICEFEM_DOFMAP_HPP

#include <vector>

#include "icefem/mesh.hpp"

namespace icefem {

enum class SpaceKind { VectorLagrange, RowwiseRT };

/// Descriptor of one discrete space.  The velocity space is a vector
/// Lagrange space of order k constrained on Dirichlet edges; the stress is
/// built from Raviart-Thomas rows of order l = k-1 constrained on Neumann
/// edges (two rows are stacked into the full stress space).
struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::VectorLagrange;
  int order = 2;
  BoundaryTag constrained_tag = BoundaryTag::Dirichlet;
};

inline SpaceDescriptor velocity_space(int k) {
  return {SpaceKind::VectorLagrange, k, BoundaryTag::Dirichlet};
}
inline SpaceDescriptor stress_row_space(int l) {
  return {SpaceKind::RowwiseRT, l, BoundaryTag::Neumann};
}

struct DofMap {
  int n_dofs = 0;
  int dofs_per_cell = 0;
  std::vector<int> cell_dofs;      // [cell * dofs_per_cell + i]
  std::vector<double> cell_signs;  // +-1, nontrivial only for RT edge dofs
  std::vector<char> constrained;   // per global dof
  int n_constrained = 0;

  int dof(int cell, int i) const { return cell_dofs[cell * dofs_per_cell + i]; }
  double sign(int cell, int i) const { return cell_signs[cell * dofs_per_cell + i]; }
};

/// Global dof layout.  VectorLagrange(k): dof = 2*node + component with the
/// scalar nodes being vertices (k>=1) then edge midpoints (k=2); a node on a
/// Dirichlet edge constrains both components.  RowwiseRT(l): one stress row;
/// edges carry l+1 moments (dof = (l+1)*edge + m), followed for l=1 by two
/// interior dofs per cell; edge dofs on Neumann edges are constrained.  The
/// sign of a constant edge moment is the cell's traversal orientation of the
/// edge; linear edge moments and interior dofs carry sign +1.
DofMap build_dofmap(const SpaceDescriptor& space, const Triangulation& tri);

}  // namespace icefem

#endif

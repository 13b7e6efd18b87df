#ifndef ICEFEM_ELEMENTS_HPP
#define ICEFEM_ELEMENTS_HPP

#include <array>
#include <vector>

#include "icefem/geometry.hpp"

namespace icefem {

// Reference triangle conventions: vertices v0=(0,0), v1=(1,0), v2=(0,1);
// edge i is opposite vertex i and runs from v_{i+1} to v_{i+2} (cyclic).

inline constexpr int lagrange_size(int k) { return k == 1 ? 3 : 6; }
inline constexpr int rt_size(int l) { return l == 0 ? 3 : 8; }
inline constexpr int rt_edge_moments(int l) { return l + 1; }

/// Nodal Lagrange basis at a reference point.  k=1: vertex values; k=2:
/// vertices then edge midpoints (midpoint i on the edge opposite vertex i).
void lagrange_basis(int k, const Vec2& p, double* values, Vec2* gradients);

/// Reference positions of the Lagrange nodes.
std::vector<Vec2> lagrange_nodes(int k);

/// Raviart-Thomas reference shape functions dual to the edge flux moments
/// int_e v.n q ds with q in {1, 2s-1} along the reference edge direction
/// (plus, for l=1, the two interior moments int_T v.e_i dx).
/// Ordering: per edge the constant then the linear moment, interior last.
void rt_basis(int l, const Vec2& p, Vec2* values, double* divergences);

/// Contravariant Piola transform of RT values: v -> (1/det) J v,
/// div -> (1/det) div.  Edge flux moments are preserved.
void piola_push(const AffineMap& map, int n, const Vec2* ref_values,
                const double* ref_divs, Vec2* phys_values, double* phys_divs);

// Reference edge geometry used by the RT moments.
std::array<Vec2, 2> ref_edge_endpoints(int edge);
Vec2 ref_edge_outward_normal(int edge);
double ref_edge_length(int edge);

}  // namespace icefem

#endif

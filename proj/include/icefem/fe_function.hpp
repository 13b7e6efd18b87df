#ifndef ICEFEM_FE_FUNCTION_HPP
#define ICEFEM_FE_FUNCTION_HPP

#include <functional>
#include <span>
#include <vector>

#include "icefem/dofmap.hpp"
#include "icefem/elements.hpp"
#include "icefem/mesh.hpp"

namespace icefem {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Mat2(const Vec2&)>;

/// Coefficient vector on a discrete space.  For RowwiseRT the coefficients
/// hold both stress rows stacked (length 2 * row dofs); constrained entries
/// are kept exactly zero.
struct FeFunction {
  SpaceDescriptor space;
  std::vector<double> coeffs;
};

void apply_constraints(const DofMap& map, std::span<double> coeffs);

FeFunction interpolate_velocity(const Triangulation& tri, const DofMap& map,
                                int k, const VectorField& f);

/// Moment interpolation of a single RT row.
std::vector<double> interpolate_rt_row(const Triangulation& tri,
                                       const DofMap& map, int l,
                                       const VectorField& f);

/// As interpolate_rt_row, but the field may depend on the cell it is
/// evaluated from (edge moments use the first adjacent cell).  Lets
/// discontinuous piecewise fields be interpolated one-sidedly.
using CellVectorField = std::function<Vec2(int cell, const Vec2&)>;
std::vector<double> interpolate_rt_row_cellwise(const Triangulation& tri,
                                                const DofMap& map, int l,
                                                const CellVectorField& f);

/// Both stress rows; rows(i) of the field matrix are interpolated
/// independently.
FeFunction interpolate_stress(const Triangulation& tri, const DofMap& map,
                              int l, const MatrixField& f);

struct VelocityValue {
  Vec2 value;
  Mat2 grad;  // grad(i,j) = du_i/dx_j
};

struct StressValue {
  Mat2 value;
  Vec2 div;  // row-wise divergence
};

VelocityValue evaluate_velocity(const Triangulation& tri, const DofMap& map,
                                int k, std::span<const double> coeffs,
                                int cell, const Vec2& ref);

Vec2 evaluate_rt_row(const Triangulation& tri, const DofMap& map, int l,
                     std::span<const double> row_coeffs, int cell,
                     const Vec2& ref, double* div_out = nullptr);

StressValue evaluate_stress(const Triangulation& tri, const DofMap& map, int l,
                            std::span<const double> coeffs, int cell,
                            const Vec2& ref);

// Per-cell tabulation at a fixed set of reference points; used by the
// assembly loops.  Lagrange gradients are physical; RT values and
// divergences are Piola-mapped and carry the cell's dof signs.
void tabulate_lagrange_cell(int k, const AffineMap& map,
                            std::span<const Vec2> ref_points,
                            std::vector<double>& values,
                            std::vector<Vec2>& gradients);

void tabulate_rt_cell(int l, const AffineMap& map, const DofMap& dofs,
                      int cell, std::span<const Vec2> ref_points,
                      std::vector<Vec2>& values, std::vector<double>& divs);

}  // namespace icefem

#endif

#include "icefem/fe_function.hpp"

#include "icefem/errors.hpp"
#include "icefem/quadrature.hpp"

namespace icefem {

void apply_constraints(const DofMap& map, std::span<double> coeffs) {
  const size_t n = map.constrained.size();
  for (size_t rep = 0; rep < coeffs.size() / n; ++rep)
    for (size_t i = 0; i < n; ++i)
      if (map.constrained[i]) coeffs[rep * n + i] = 0.0;
}

FeFunction interpolate_velocity(const Triangulation& tri, const DofMap& map,
                                int k, const VectorField& f) {
  FeFunction u{velocity_space(k), std::vector<double>(map.n_dofs, 0.0)};
  for (int v = 0; v < tri.n_points(); ++v) {
    Vec2 val = f(tri.points[v]);
    u.coeffs[2 * v] = val.x;
    u.coeffs[2 * v + 1] = val.y;
  }
  if (k == 2) {
    const int nv = tri.n_points();
    for (int e = 0; e < tri.n_edges(); ++e) {
      Vec2 val = f(tri.edge_midpoint(e));
      u.coeffs[2 * (nv + e)] = val.x;
      u.coeffs[2 * (nv + e) + 1] = val.y;
    }
  }
  apply_constraints(map, u.coeffs);
  return u;
}

std::vector<double> interpolate_rt_row_cellwise(const Triangulation& tri,
                                                const DofMap& map, int l,
                                                const CellVectorField& f) {
  std::vector<double> coeffs(map.n_dofs, 0.0);
  const int nm = rt_edge_moments(l);
  EdgeQuadratureRule eq = make_edge_quadrature(6);

  for (int e = 0; e < tri.n_edges(); ++e) {
    const Vec2 a = tri.points[tri.edges[e][0]];
    const Vec2 b = tri.points[tri.edges[e][1]];
    const Vec2 n = tri.edge_normal(e);
    const double len = tri.edge_length(e);
    const int cell = tri.edge_cells[e][0];
    double m0 = 0.0, m1 = 0.0;
    for (int q = 0; q < eq.size(); ++q) {
      double s = eq.points[q];
      double vn = dot(f(cell, a + s * (b - a)), n) * eq.weights[q] * len;
      m0 += vn;
      m1 += vn * (2.0 * s - 1.0);
    }
    coeffs[nm * e] = m0;
    if (nm > 1) coeffs[nm * e + 1] = m1;
  }

  if (l == 1) {
    QuadratureRule tq = make_quadrature(4);
    const int off = nm * tri.n_edges();
    for (int c = 0; c < tri.n_cells(); ++c) {
      AffineMap amap = tri.cell_map(c);
      Vec2 m{0.0, 0.0};
      for (int q = 0; q < tq.size(); ++q) {
        // pull the field back; the interior dofs are reference moments
        Vec2 v = f(c, amap.apply(tq.points[q]));
        m += tq.weights[q] * amap.det * (amap.inv_jacobian * v);
      }
      coeffs[off + 2 * c] = m.x;
      coeffs[off + 2 * c + 1] = m.y;
    }
  }
  apply_constraints(map, coeffs);
  return coeffs;
}

std::vector<double> interpolate_rt_row(const Triangulation& tri,
                                       const DofMap& map, int l,
                                       const VectorField& f) {
  return interpolate_rt_row_cellwise(
      tri, map, l, [&](int, const Vec2& p) { return f(p); });
}

FeFunction interpolate_stress(const Triangulation& tri, const DofMap& map,
                              int l, const MatrixField& f) {
  FeFunction sigma{stress_row_space(l), {}};
  sigma.coeffs.reserve(2 * map.n_dofs);
  for (int row = 0; row < 2; ++row) {
    auto row_field = [&, row](const Vec2& p) { return f(p).row(row); };
    auto rc = interpolate_rt_row(tri, map, l, row_field);
    sigma.coeffs.insert(sigma.coeffs.end(), rc.begin(), rc.end());
  }
  return sigma;
}

VelocityValue evaluate_velocity(const Triangulation& tri, const DofMap& map,
                                int k, std::span<const double> coeffs,
                                int cell, const Vec2& ref) {
  const int n = lagrange_size(k);
  double vals[6];
  Vec2 ref_grads[6];
  lagrange_basis(k, ref, vals, ref_grads);
  AffineMap amap = tri.cell_map(cell);
  Mat2 jinv_t = transpose(amap.inv_jacobian);

  VelocityValue out;
  for (int i = 0; i < n; ++i) {
    Vec2 g = jinv_t * ref_grads[i];
    double cx = coeffs[map.dof(cell, 2 * i)];
    double cy = coeffs[map.dof(cell, 2 * i + 1)];
    out.value += vals[i] * Vec2{cx, cy};
    out.grad += Mat2{cx * g.x, cx * g.y, cy * g.x, cy * g.y};
  }
  return out;
}

Vec2 evaluate_rt_row(const Triangulation& tri, const DofMap& map, int l,
                     std::span<const double> row_coeffs, int cell,
                     const Vec2& ref, double* div_out) {
  const int n = rt_size(l);
  Vec2 ref_vals[8];
  double ref_divs[8];
  rt_basis(l, ref, ref_vals, ref_divs);
  AffineMap amap = tri.cell_map(cell);
  Vec2 vals[8];
  double divs[8];
  piola_push(amap, n, ref_vals, ref_divs, vals, divs);

  Vec2 value{0.0, 0.0};
  double div = 0.0;
  for (int i = 0; i < n; ++i) {
    double c = row_coeffs[map.dof(cell, i)] * map.sign(cell, i);
    value += c * vals[i];
    div += c * divs[i];
  }
  if (div_out) *div_out = div;
  return value;
}

StressValue evaluate_stress(const Triangulation& tri, const DofMap& map, int l,
                            std::span<const double> coeffs, int cell,
                            const Vec2& ref) {
  StressValue out;
  for (int row = 0; row < 2; ++row) {
    double div = 0.0;
    Vec2 v = evaluate_rt_row(tri, map, l,
                             coeffs.subspan(static_cast<size_t>(row) * map.n_dofs,
                                            map.n_dofs),
                             cell, ref, &div);
    if (row == 0) {
      out.value.xx = v.x;
      out.value.xy = v.y;
      out.div.x = div;
    } else {
      out.value.yx = v.x;
      out.value.yy = v.y;
      out.div.y = div;
    }
  }
  return out;
}

void tabulate_lagrange_cell(int k, const AffineMap& map,
                            std::span<const Vec2> ref_points,
                            std::vector<double>& values,
                            std::vector<Vec2>& gradients) {
  const int n = lagrange_size(k);
  const int nq = static_cast<int>(ref_points.size());
  values.resize(static_cast<size_t>(nq) * n);
  gradients.resize(static_cast<size_t>(nq) * n);
  Mat2 jinv_t = transpose(map.inv_jacobian);
  Vec2 ref_grads[6];
  for (int q = 0; q < nq; ++q) {
    lagrange_basis(k, ref_points[q], &values[static_cast<size_t>(q) * n], ref_grads);
    for (int i = 0; i < n; ++i)
      gradients[static_cast<size_t>(q) * n + i] = jinv_t * ref_grads[i];
  }
}

void tabulate_rt_cell(int l, const AffineMap& map, const DofMap& dofs,
                      int cell, std::span<const Vec2> ref_points,
                      std::vector<Vec2>& values, std::vector<double>& divs) {
  const int n = rt_size(l);
  const int nq = static_cast<int>(ref_points.size());
  values.resize(static_cast<size_t>(nq) * n);
  divs.resize(static_cast<size_t>(nq) * n);
  Vec2 ref_vals[8];
  double ref_divs[8];
  for (int q = 0; q < nq; ++q) {
    rt_basis(l, ref_points[q], ref_vals, ref_divs);
    piola_push(map, n, ref_vals, ref_divs, &values[static_cast<size_t>(q) * n],
               &divs[static_cast<size_t>(q) * n]);
    for (int i = 0; i < n; ++i) {
      double s = dofs.sign(cell, i);
      values[static_cast<size_t>(q) * n + i] *= s;
      divs[static_cast<size_t>(q) * n + i] *= s;
    }
  }
}

}  // namespace icefem

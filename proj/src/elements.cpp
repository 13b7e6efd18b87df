#include "icefem/elements.hpp"

#include <cmath>

#include "icefem/errors.hpp"
#include "icefem/quadrature.hpp"

namespace icefem {

namespace {

const Vec2 kRefVertex[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

// RT1 monomial generators: the full (P1)^2 plus x times the homogeneous
// linear polynomials.  RT0 uses the first three entries of a reduced set.
Vec2 rt1_generator(int j, const Vec2& p) {
  switch (j) {
    case 0: return {1.0, 0.0};
    case 1: return {p.x, 0.0};
    case 2: return {p.y, 0.0};
    case 3: return {0.0, 1.0};
    case 4: return {0.0, p.x};
    case 5: return {0.0, p.y};
    case 6: return {p.x * p.x, p.x * p.y};
    case 7: return {p.x * p.y, p.y * p.y};
  }
  return {};
}

double rt1_generator_div(int j, const Vec2& p) {
  switch (j) {
    case 1: return 1.0;
    case 5: return 1.0;
    case 6: return 3.0 * p.x;
    case 7: return 3.0 * p.y;
  }
  return 0.0;
}

Vec2 rt0_generator(int j, const Vec2& p) {
  switch (j) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {p.x, p.y};
  }
  return {};
}

double rt0_generator_div(int j) { return j == 2 ? 2.0 : 0.0; }

// Reference moments of a generator, see rt_basis.
void rt_moments(int l, int j, double* out) {
  EdgeQuadratureRule eq = make_edge_quadrature(4);
  int nm = rt_edge_moments(l);
  for (int e = 0; e < 3; ++e) {
    auto ends = ref_edge_endpoints(e);
    Vec2 n = ref_edge_outward_normal(e);
    double len = ref_edge_length(e);
    for (int m = 0; m < nm; ++m) out[e * nm + m] = 0.0;
    for (int q = 0; q < eq.size(); ++q) {
      double s = eq.points[q];
      Vec2 p = ends[0] + s * (ends[1] - ends[0]);
      Vec2 v = l == 0 ? rt0_generator(j, p) : rt1_generator(j, p);
      double vn = dot(v, n) * eq.weights[q] * len;
      out[e * nm + 0] += vn;
      if (nm > 1) out[e * nm + 1] += vn * (2.0 * s - 1.0);
    }
  }
  if (l == 1) {
    QuadratureRule tq = make_quadrature(3);
    out[6] = out[7] = 0.0;
    for (int q = 0; q < tq.size(); ++q) {
      Vec2 v = rt1_generator(j, tq.points[q]);
      out[6] += tq.weights[q] * v.x;
      out[7] += tq.weights[q] * v.y;
    }
  }
}

// Dense LU solve with partial pivoting, A is n x n row-major; B holds n
// right-hand sides (columns) and is overwritten by the solution.
void dense_solve(int n, std::vector<double>& a, std::vector<double>& b) {
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;
  for (int col = 0; col < n; ++col) {
    int best = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[best * n + col])) best = r;
    if (a[best * n + col] == 0.0) throw Error("rt_basis: singular moment matrix");
    if (best != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[best * n + c]);
      for (int c = 0; c < n; ++c) std::swap(b[col * n + c], b[best * n + c]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      for (int c = 0; c < n; ++c) b[r * n + c] -= f * b[col * n + c];
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    for (int c = 0; c < n; ++c) {
      double s = b[col * n + c];
      for (int k = col + 1; k < n; ++k) s -= a[col * n + k] * b[k * n + c];
      b[col * n + c] = s / a[col * n + col];
    }
  }
}

// Coefficients of the dual basis in the generator set: column i holds the
// generator coefficients of the shape function dual to moment i.
const std::vector<double>& rt_dual_coefficients(int l) {
  static const std::vector<double> c0 = [] {
    int n = 3;
    std::vector<double> m(n * n), id(n * n, 0.0);
    for (int i = 0; i < n; ++i) id[i * n + i] = 1.0;
    for (int j = 0; j < n; ++j) {
      double col[3];
      rt_moments(0, j, col);
      for (int i = 0; i < n; ++i) m[i * n + j] = col[i];
    }
    dense_solve(n, m, id);
    return id;
  }();
  static const std::vector<double> c1 = [] {
    int n = 8;
    std::vector<double> m(n * n), id(n * n, 0.0);
    for (int i = 0; i < n; ++i) id[i * n + i] = 1.0;
    for (int j = 0; j < n; ++j) {
      double col[8];
      rt_moments(1, j, col);
      for (int i = 0; i < n; ++i) m[i * n + j] = col[i];
    }
    dense_solve(n, m, id);
    return id;
  }();
  return l == 0 ? c0 : c1;
}

}  // namespace

std::array<Vec2, 2> ref_edge_endpoints(int edge) {
  return {kRefVertex[(edge + 1) % 3], kRefVertex[(edge + 2) % 3]};
}

Vec2 ref_edge_outward_normal(int edge) {
  switch (edge) {
    case 0: return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    case 1: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double ref_edge_length(int edge) { return edge == 0 ? std::sqrt(2.0) : 1.0; }

void lagrange_basis(int k, const Vec2& p, double* values, Vec2* gradients) {
  const double l0 = 1.0 - p.x - p.y, l1 = p.x, l2 = p.y;
  const Vec2 g0{-1.0, -1.0}, g1{1.0, 0.0}, g2{0.0, 1.0};
  if (k == 1) {
    values[0] = l0;
    values[1] = l1;
    values[2] = l2;
    if (gradients) {
      gradients[0] = g0;
      gradients[1] = g1;
      gradients[2] = g2;
    }
    return;
  }
  if (k != 2) throw Error("lagrange_basis: order must be 1 or 2");
  values[0] = l0 * (2.0 * l0 - 1.0);
  values[1] = l1 * (2.0 * l1 - 1.0);
  values[2] = l2 * (2.0 * l2 - 1.0);
  values[3] = 4.0 * l1 * l2;
  values[4] = 4.0 * l2 * l0;
  values[5] = 4.0 * l0 * l1;
  if (gradients) {
    gradients[0] = (4.0 * l0 - 1.0) * g0;
    gradients[1] = (4.0 * l1 - 1.0) * g1;
    gradients[2] = (4.0 * l2 - 1.0) * g2;
    gradients[3] = 4.0 * (l2 * g1 + l1 * g2);
    gradients[4] = 4.0 * (l0 * g2 + l2 * g0);
    gradients[5] = 4.0 * (l1 * g0 + l0 * g1);
  }
}

std::vector<Vec2> lagrange_nodes(int k) {
  std::vector<Vec2> nodes(kRefVertex, kRefVertex + 3);
  if (k == 2) {
    for (int e = 0; e < 3; ++e) {
      auto ends = ref_edge_endpoints(e);
      nodes.push_back(0.5 * (ends[0] + ends[1]));
    }
  }
  return nodes;
}

void rt_basis(int l, const Vec2& p, Vec2* values, double* divergences) {
  if (l != 0 && l != 1) throw Error("rt_basis: order must be 0 or 1");
  const auto& coeff = rt_dual_coefficients(l);
  const int n = rt_size(l);
  for (int i = 0; i < n; ++i) {
    Vec2 v{0.0, 0.0};
    double d = 0.0;
    for (int j = 0; j < n; ++j) {
      double c = coeff[j * n + i];
      if (c == 0.0) continue;
      if (l == 0) {
        v += c * rt0_generator(j, p);
        d += c * rt0_generator_div(j);
      } else {
        v += c * rt1_generator(j, p);
        d += c * rt1_generator_div(j, p);
      }
    }
    values[i] = v;
    if (divergences) divergences[i] = d;
  }
}

void piola_push(const AffineMap& map, int n, const Vec2* ref_values,
                const double* ref_divs, Vec2* phys_values, double* phys_divs) {
  const double inv_det = 1.0 / map.det;
  for (int i = 0; i < n; ++i) {
    phys_values[i] = inv_det * (map.jacobian * ref_values[i]);
    if (phys_divs && ref_divs) phys_divs[i] = inv_det * ref_divs[i];
  }
}

}  // namespace icefem

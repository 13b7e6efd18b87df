#ifndef ICEFEM_QUADRATURE_HPP
#define ICEFEM_QUADRATURE_HPP

#include <vector>

#include "icefem/geometry.hpp"

namespace icefem {

/// Quadrature on the reference triangle {(0,0),(1,0),(0,1)}.
/// All weights are positive and sum to the reference area 1/2; monomials
/// x^a y^b with a+b <= degree are integrated exactly.
struct QuadratureRule {
  int degree = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Smallest shipped positive rule exact to at least the requested degree
/// (1 <= degree <= 8).  Throws on an unsupported degree.
QuadratureRule make_quadrature(int degree);

/// Gauss-Legendre rule on [0,1]; n in [1,6] points, exact to degree 2n-1.
struct EdgeQuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;  // sum to 1

  int size() const { return static_cast<int>(points.size()); }
};

EdgeQuadratureRule make_edge_quadrature(int n_points);

}  // namespace icefem

#endif

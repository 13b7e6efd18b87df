#include "icefem/quadrature.hpp"

#include <cmath>

#include "icefem/errors.hpp"

namespace icefem {

namespace {

// Appends the orbit of a symmetric barycentric point (a,a,b), b = 1-2a,
// with weight w given relative to unit total (scaled by area 1/2 here).
void push_orbit3(QuadratureRule& q, double a, double w) {
  double b = 1.0 - 2.0 * a;
  q.points.push_back({a, a});
  q.points.push_back({b, a});
  q.points.push_back({a, b});
  for (int i = 0; i < 3; ++i) q.weights.push_back(0.5 * w);
}

// Orbit of a general barycentric point (a,b,c): all 6 permutations.
void push_orbit6(QuadratureRule& q, double a, double b, double w) {
  double c = 1.0 - a - b;
  // coordinates (x,y) = (lambda1, lambda2) for barycentric (lambda0,l1,l2)
  q.points.push_back({b, c});
  q.points.push_back({c, b});
  q.points.push_back({a, c});
  q.points.push_back({c, a});
  q.points.push_back({a, b});
  q.points.push_back({b, a});
  for (int i = 0; i < 6; ++i) q.weights.push_back(0.5 * w);
}

QuadratureRule degree1() {
  QuadratureRule q;
  q.degree = 1;
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(0.5);
  return q;
}

QuadratureRule degree2() {
  QuadratureRule q;
  q.degree = 2;
  push_orbit3(q, 0.5, 1.0 / 3.0);  // edge midpoints
  return q;
}

QuadratureRule degree4() {
  QuadratureRule q;
  q.degree = 4;
  push_orbit3(q, 0.44594849091596489, 0.22338158967801147);
  push_orbit3(q, 0.091576213509770743, 0.10995174365532187);
  return q;
}

QuadratureRule degree5() {
  QuadratureRule q;
  q.degree = 5;
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(0.5 * 0.225);
  push_orbit3(q, 0.47014206410511509, 0.13239415278850618);
  push_orbit3(q, 0.10128650732345634, 0.12593918054482715);
  return q;
}

QuadratureRule degree6() {
  QuadratureRule q;
  q.degree = 6;
  push_orbit3(q, 0.24928674517091042, 0.11678627572637937);
  push_orbit3(q, 0.063089014491502228, 0.050844906370206817);
  push_orbit6(q, 0.053145049844816947, 0.31035245103378441, 0.082851075618373575);
  return q;
}

QuadratureRule degree8() {
  QuadratureRule q;
  q.degree = 8;
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(0.5 * 0.14431560767778717);
  push_orbit3(q, 0.45929258829272316, 0.095091634267284625);
  push_orbit3(q, 0.17056930775176021, 0.10321737053471825);
  push_orbit3(q, 0.050547228317030975, 0.03245849762319808);
  push_orbit6(q, 0.26311282963463811, 0.72849239295540428, 0.027230314174434994);
  return q;
}

}  // namespace

QuadratureRule make_quadrature(int degree) {
  switch (degree) {
    case 1: return degree1();
    case 2: return degree2();
    case 3:
    case 4: return degree4();
    case 5: return degree5();
    case 6: return degree6();
    case 7:
    case 8: return degree8();
    default:
      throw Error("make_quadrature: unsupported degree " + std::to_string(degree));
  }
}

EdgeQuadratureRule make_edge_quadrature(int n_points) {
  // Gauss-Legendre abscissae on [-1,1], mapped to [0,1].
  static const double g2 = 0.5773502691896257645;
  static const double g3 = 0.7745966692414833770;
  static const double g4a = 0.3399810435848562648, g4b = 0.8611363115940525752;
  static const double w4a = 0.6521451548625461426, w4b = 0.3478548451374538574;
  static const double g5a = 0.5384693101056830910, g5b = 0.9061798459386639928;
  static const double w5a = 0.4786286704993664680, w5b = 0.2369268850561890875;
  static const double g6a = 0.2386191860831969086, g6b = 0.6612093864662645137,
                      g6c = 0.9324695142031520278;
  static const double w6a = 0.4679139345726910474, w6b = 0.3607615730481386076,
                      w6c = 0.1713244923791703450;

  std::vector<double> x, w;
  switch (n_points) {
    case 1: x = {0.0}; w = {2.0}; break;
    case 2: x = {-g2, g2}; w = {1.0, 1.0}; break;
    case 3: x = {-g3, 0.0, g3}; w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}; break;
    case 4: x = {-g4b, -g4a, g4a, g4b}; w = {w4b, w4a, w4a, w4b}; break;
    case 5:
      x = {-g5b, -g5a, 0.0, g5a, g5b};
      w = {w5b, w5a, 128.0 / 225.0, w5a, w5b};
      break;
    case 6:
      x = {-g6c, -g6b, -g6a, g6a, g6b, g6c};
      w = {w6c, w6b, w6a, w6a, w6b, w6c};
      break;
    default:
      throw Error("make_edge_quadrature: unsupported point count " +
                  std::to_string(n_points));
  }
  EdgeQuadratureRule q;
  for (size_t i = 0; i < x.size(); ++i) {
    q.points.push_back(0.5 * (x[i] + 1.0));
    q.weights.push_back(0.5 * w[i]);
  }
  return q;
}

}  // namespace icefem

#ifndef ICEFEM_GEOMETRY_HPP
#define ICEFEM_GEOMETRY_HPP

#include <cmath>

namespace icefem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// 2x2 matrix, row-major entries.
struct Mat2 {
  double xx = 0.0, xy = 0.0;
  double yx = 0.0, yy = 0.0;

  Mat2() = default;
  Mat2(double a, double b, double c, double d) : xx(a), xy(b), yx(c), yy(d) {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Mat2& operator+=(const Mat2& o) {
    xx += o.xx; xy += o.xy; yx += o.yx; yy += o.yy;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    xx -= o.xx; xy -= o.xy; yx -= o.yx; yy -= o.yy;
    return *this;
  }
  Mat2& operator*=(double s) {
    xx *= s; xy *= s; yx *= s; yy *= s;
    return *this;
  }

  Vec2 row(int i) const { return i == 0 ? Vec2{xx, xy} : Vec2{yx, yy}; }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(double s, Mat2 a) { return a *= s; }
inline Mat2 operator*(Mat2 a, double s) { return a *= s; }
inline Mat2 operator-(const Mat2& a) { return {-a.xx, -a.xy, -a.yx, -a.yy}; }

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.xx * v.x + m.xy * v.y, m.yx * v.x + m.yy * v.y};
}

inline Mat2 transpose(const Mat2& m) { return {m.xx, m.yx, m.xy, m.yy}; }
inline double det(const Mat2& m) { return m.xx * m.yy - m.xy * m.yx; }
inline Mat2 inverse(const Mat2& m) {
  double d = det(m);
  return {m.yy / d, -m.xy / d, -m.yx / d, m.xx / d};
}

/// Frobenius inner product A:B.
inline double ddot(const Mat2& a, const Mat2& b) {
  return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}
inline double frobenius_norm(const Mat2& a) { return std::sqrt(ddot(a, a)); }

/// Symmetric part 0.5 (M + M^T).
inline Mat2 sym(const Mat2& m) {
  double off = 0.5 * (m.xy + m.yx);
  return {m.xx, off, off, m.yy};
}

/// Affine map x = J xhat + b from the reference triangle {(0,0),(1,0),(0,1)}
/// onto a physical cell.  det > 0 for valid cells.
struct AffineMap {
  Mat2 jacobian;
  Vec2 offset;
  double det = 0.0;
  Mat2 inv_jacobian;

  Vec2 apply(const Vec2& ref) const { return jacobian * ref + offset; }
  Vec2 pull(const Vec2& phys) const { return inv_jacobian * (phys - offset); }
};

inline AffineMap make_affine_map(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  AffineMap m;
  m.jacobian = Mat2{p1.x - p0.x, p2.x - p0.x, p1.y - p0.y, p2.y - p0.y};
  m.offset = p0;
  m.det = det(m.jacobian);
  m.inv_jacobian = inverse(m.jacobian);
  return m;
}

}  // namespace icefem

#endif

#pragma once

// Small dense linear algebra on the plane and its projective line.
//
// Directions (points of the projective line) are stored as canonical angles
// in [0, pi). Arcs are counterclockwise on that circle of length pi.

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affdim {

inline constexpr double kPi = std::numbers::pi;

/// |det| below this is treated as singular.
inline constexpr double kSingularFloor = 1e-300;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  static Mat2 rotation(double phi) {
    return {std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
  }

  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }
  /// Frobenius norm squared, i.e. trace(M M^T).
  double frob2() const { return a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22; }
  double max_abs() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)), std::max(std::abs(a21), std::abs(a22)));
  }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  bool lower_triangular() const { return a12 == 0.0; }

  /// Throws SingularMatrix when |det| is below the floor.
  Mat2 inverse() const;

  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a11 * n.a11 + m.a12 * n.a21, m.a11 * n.a12 + m.a12 * n.a22,
            m.a21 * n.a11 + m.a22 * n.a21, m.a21 * n.a12 + m.a22 * n.a22};
  }
  friend Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

struct SingularPair {
  double alpha1 = 1.0;  ///< operator norm
  double alpha2 = 1.0;  ///< 1 / ||M^{-1}||
};

/// Closed-form singular values from trace and determinant of M M^T.
SingularPair singular_values(const Mat2& m);

/// Operator norm (largest singular value); defined for singular matrices too.
double operator_norm(const Mat2& m);

/// Singular value function; s must be non-negative.
double phi_s(const SingularPair& sv, double s);
double phi_s(const Mat2& m, double s);

/// log phi^s from log singular values, used by the enumeration kernels.
inline double log_phi_s(double log_alpha1, double log_alpha2, double s) {
  if (s <= 1.0) return s * log_alpha1;
  if (s <= 2.0) return log_alpha1 + (s - 1.0) * log_alpha2;
  return 0.5 * s * (log_alpha1 + log_alpha2);
}

/// A line through the origin, as its angle in [0, pi).
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(double theta) : theta_(canonical(theta)) {}

  static ProjPoint from_vector(Vec2 v) { return ProjPoint(std::atan2(v.y, v.x)); }
  /// Direction of (1, slope).
  static ProjPoint from_slope(double slope) { return ProjPoint(std::atan(slope)); }

  double theta() const { return theta_; }
  Vec2 unit() const { return {std::cos(theta_), std::sin(theta_)}; }

  static double canonical(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t = 0.0;
    return t;
  }

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;

 private:
  double theta_ = 0.0;
};

/// |sin(theta1 - theta2)|.
double proj_metric(ProjPoint p, ProjPoint q);

/// Counterclockwise angular offset from p to q, in [0, pi).
double ccw_offset(ProjPoint from, ProjPoint to);

/// Direction of m v for v spanning p.
ProjPoint proj_act(const Mat2& m, ProjPoint p);

/// Closed counterclockwise arc [start, start + length] of the projective line.
class ProjArc {
 public:
  ProjArc() = default;
  /// Arc running counterclockwise from start to end; endpoints must differ.
  ProjArc(ProjPoint start, ProjPoint end);
  static ProjArc centered(ProjPoint mid, double half_width);

  ProjPoint start() const { return start_; }
  ProjPoint end() const { return ProjPoint(start_.theta() + length_); }
  ProjPoint midpoint() const { return ProjPoint(start_.theta() + 0.5 * length_); }
  double length() const { return length_; }

  /// Membership with an angular slack (positive slack enlarges the arc).
  bool contains(ProjPoint p, double slack = 0.0) const;
  /// Angular clearance of `inner` inside this arc: min distance between the
  /// corresponding endpoints, negative if `inner` sticks out.
  double clearance(const ProjArc& inner) const;
  bool overlaps(const ProjArc& other) const;
  ProjArc inflated(double eps) const;

 private:
  ProjPoint start_{};
  double length_ = 0.0;
};

/// Image of a closed arc; orientation resolved by mapping the midpoint.
ProjArc arc_image(const Mat2& m, const ProjArc& arc);

}  // namespace affdim

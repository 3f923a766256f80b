#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace circ {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Symplectic matrix J = [[0, 1], [-1, 0]].
inline Mat2 symplectic_matrix() {
  Mat2 j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

/// Out-of-plane cross product: b3 x v = (-v_y, v_x).
inline Vec2 b3_cross(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline Mat2 rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

/// Body velocity (Omega, V) in the moving frame.
struct Se2Vector {
  double ang = 0.0;  // angular rate Omega
  Vec2 lin = Vec2::Zero();

  Se2Vector() = default;
  Se2Vector(double omega, const Vec2& v) : ang(omega), lin(v) {}
  Se2Vector(double omega, double vx, double vy) : ang(omega), lin(vx, vy) {}

  Vec3 as_vec3() const { return Vec3(ang, lin.x(), lin.y()); }
  static Se2Vector from_vec3(const Vec3& v) { return {v[0], Vec2(v[1], v[2])}; }

  Se2Vector operator+(const Se2Vector& o) const { return {ang + o.ang, lin + o.lin}; }
  Se2Vector operator-(const Se2Vector& o) const { return {ang - o.ang, lin - o.lin}; }
  Se2Vector operator*(double s) const { return {ang * s, lin * s}; }
};

/// Body-frame momentum (Pi, P).
struct Se2Momentum {
  double ang = 0.0;  // angular momentum Pi
  Vec2 lin = Vec2::Zero();

  Se2Momentum() = default;
  Se2Momentum(double pi, const Vec2& p) : ang(pi), lin(p) {}
  Se2Momentum(double pi, double px, double py) : ang(pi), lin(px, py) {}

  Vec3 as_vec3() const { return Vec3(ang, lin.x(), lin.y()); }
  static Se2Momentum from_vec3(const Vec3& v) { return {v[0], Vec2(v[1], v[2])}; }

  Se2Momentum operator+(const Se2Momentum& o) const { return {ang + o.ang, lin + o.lin}; }
  Se2Momentum operator-(const Se2Momentum& o) const { return {ang - o.ang, lin - o.lin}; }
  Se2Momentum operator*(double s) const { return {ang * s, lin * s}; }
};

inline double pairing(const Se2Momentum& pi, const Se2Vector& zeta) {
  return pi.ang * zeta.ang + pi.lin.dot(zeta.lin);
}

/// Momentum on the dual of the centrally extended algebra; p is the
/// extension coordinate and stays constant under the dynamics.
struct OscMomentum {
  Se2Momentum pi;
  double p = 0.0;

  OscMomentum() = default;
  OscMomentum(const Se2Momentum& m, double ext) : pi(m), p(ext) {}

  Eigen::Vector4d as_vec4() const {
    return Eigen::Vector4d(pi.ang, pi.lin.x(), pi.lin.y(), p);
  }
  static OscMomentum from_vec4(const Eigen::Vector4d& v) {
    return {Se2Momentum(v[0], Vec2(v[1], v[2])), v[3]};
  }
};

/// Planar rigid motion (theta stored unwrapped).
class Se2Element {
 public:
  Se2Element() = default;
  Se2Element(double theta, const Vec2& x0) : theta_(theta), x0_(x0) {}
  Se2Element(double theta, double x, double y) : theta_(theta), x0_(x, y) {}

  static Se2Element identity() { return {}; }

  double theta() const { return theta_; }
  const Vec2& translation() const { return x0_; }
  Mat2 rot() const { return rotation(theta_); }

  Mat3 matrix() const {
    Mat3 m = Mat3::Identity();
    m.topLeftCorner<2, 2>() = rot();
    m.topRightCorner<2, 1>() = x0_;
    return m;
  }

  Vec2 apply(const Vec2& x) const { return rot() * x + x0_; }

 private:
  double theta_ = 0.0;
  Vec2 x0_ = Vec2::Zero();
};

inline Se2Element compose(const Se2Element& g, const Se2Element& h) {
  return {g.theta() + h.theta(), g.translation() + g.rot() * h.translation()};
}

inline Se2Element inverse(const Se2Element& g) {
  const Mat2 rt = g.rot().transpose();
  return {-g.theta(), Vec2(-(rt * g.translation()))};
}

/// Closed-form exponential: theta = Omega t, translation by the
/// integrated rotation, with a series branch near Omega = 0.
inline Se2Element exp(const Se2Vector& zeta, double t = 1.0) {
  const double phi = zeta.ang * t;
  double a, b;  // trans = (a I + b K) V with K = d/dtheta R at 0
  if (std::abs(phi) < 1e-6) {
    a = t * (1.0 - phi * phi / 6.0);
    b = t * (phi / 2.0) * (1.0 - phi * phi / 12.0);
  } else {
    a = std::sin(phi) / zeta.ang;
    b = (1.0 - std::cos(phi)) / zeta.ang;
  }
  Mat2 k;
  k << 0.0, -1.0, 1.0, 0.0;
  const Vec2 trans = (a * Mat2::Identity() + b * k) * zeta.lin;
  return {phi, trans};
}

/// Ad_{g^-1} zeta = (Omega, R^T (V - Omega J x0)).
inline Se2Vector ad_action(const Se2Element& g, const Se2Vector& zeta) {
  const Mat2 j = symplectic_matrix();
  return {zeta.ang,
          Vec2(g.rot().transpose() * (zeta.lin - zeta.ang * (j * g.translation())))};
}

/// Ad*_{g^-1} pi, defined by <Ad*_{g^-1} pi, xi> = <pi, Ad_{g^-1} xi>.
inline Se2Momentum coad_action(const Se2Element& g, const Se2Momentum& pi) {
  const Mat2 j = symplectic_matrix();
  const Vec2 rp = g.rot() * pi.lin;
  return {pi.ang - rp.dot(j * g.translation()), rp};
}

/// [z1, z2] = (0, -Omega1 J V2 + Omega2 J V1), the t-derivative of
/// Ad_{exp(t z1)} z2 at t = 0.
inline Se2Vector lie_bracket(const Se2Vector& z1, const Se2Vector& z2) {
  const Mat2 j = symplectic_matrix();
  return {0.0, Vec2(-z1.ang * (j * z2.lin) + z2.ang * (j * z1.lin))};
}

}  // namespace circ

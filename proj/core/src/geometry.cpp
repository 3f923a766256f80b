#include "circ/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>

namespace circ {

namespace {

double shoelace(const std::vector<Vec2>& nodes) {
  double twice = 0.0;
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = nodes[i];
    const Vec2& q = nodes[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

BodyBoundary::BodyBoundary(std::vector<Vec2> nodes, const Vec2& conformal_center_offset)
    : nodes_(std::move(nodes)), conformal_center_offset_(conformal_center_offset) {
  const std::size_t n = nodes_.size();
  if (n < 3) throw ValidationError("body boundary needs at least 3 nodes");
  for (const Vec2& p : nodes_) {
    if (!p.allFinite()) throw ValidationError("body boundary node is not finite");
  }
  if ((nodes_.front() - nodes_.back()).norm() < 1e-14) {
    throw ValidationError("node list must not repeat the first node; the contour is closed implicitly");
  }

  double a = shoelace(nodes_);
  if (a < 0.0) {  // enforce counterclockwise orientation
    std::reverse(nodes_.begin(), nodes_.end());
    a = -a;
  }
  if (!(a > 0.0)) throw ValidationError("degenerate body: enclosed area is zero");
  area_ = a;

  // simplicity: no two non-adjacent edges may cross
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(nodes_[i], nodes_[(i + 1) % n], nodes_[j],
                             nodes_[(j + 1) % n])) {
        throw ValidationError("degenerate body: boundary self-intersects");
      }
    }
  }

  panels_.reserve(n);
  Vec2 lo = nodes_[0], hi = nodes_[0];
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Panel p;
    p.a = nodes_[i];
    p.b = nodes_[(i + 1) % n];
    p.mid = 0.5 * (p.a + p.b);
    const Vec2 e = p.b - p.a;
    p.length = e.norm();
    if (p.length < 1e-15) throw ValidationError("degenerate body: zero-length panel");
    p.tangent = e / p.length;
    p.normal = Vec2(p.tangent.y(), -p.tangent.x());  // outward for ccw contours
    panels_.push_back(p);
    perimeter_ += p.length;
    lo = lo.cwiseMin(nodes_[i]);
    hi = hi.cwiseMax(nodes_[i]);
    const double c = p.a.x() * p.b.y() - p.b.x() * p.a.y();
    cx += (p.a.x() + p.b.x()) * c;
    cy += (p.a.y() + p.b.y()) * c;
  }
  centroid_ = Vec2(cx, cy) / (6.0 * area_);
  diameter_ = (hi - lo).norm();
}

bool BodyBoundary::contains(const Vec2& x) const {
  // even-odd ray crossing
  bool inside = false;
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& p = nodes_[i];
    const Vec2& q = nodes_[j];
    if ((p.y() > x.y()) != (q.y() > x.y()) &&
        x.x() < (q.x() - p.x()) * (x.y() - p.y()) / (q.y() - p.y()) + p.x()) {
      inside = !inside;
    }
  }
  return inside;
}

namespace {

struct ParamCurve {
  std::function<Vec2(double)> at;  // t in [0, 2pi)
  Vec2 conformal_center = Vec2::Zero();
};

ParamCurve curve_for(const ShapeSpec& spec) {
  ParamCurve c;
  if (const auto* circ = std::get_if<CircleSpec>(&spec)) {
    if (!(circ->radius > 0.0)) throw ValidationError("circle radius must be positive");
    const double r = circ->radius;
    c.at = [r](double t) { return Vec2(r * std::cos(t), r * std::sin(t)); };
  } else if (const auto* ell = std::get_if<EllipseSpec>(&spec)) {
    if (!(ell->a > 0.0) || !(ell->b > 0.0)) {
      throw ValidationError("ellipse semi-axes must be positive");
    }
    const double a = ell->a, b = ell->b;
    c.at = [a, b](double t) { return Vec2(a * std::cos(t), b * std::sin(t)); };
  } else {
    const auto& jk = std::get<JoukowskiSpec>(spec);
    if (!(jk.circle_radius > 0.0) || !(jk.c > 0.0)) {
      throw ValidationError("joukowski parameters must be positive");
    }
    // the map is singular at zeta = +-c; the generating circle must not
    // enclose the origin boundary-degenerately
    if (jk.circle_radius <= jk.offset.norm()) {
      throw ValidationError("joukowski circle must enclose its own center offset");
    }
    const double r = jk.circle_radius, cc = jk.c * jk.c;
    const std::complex<double> z0(jk.offset.x(), jk.offset.y());
    c.at = [r, cc, z0](double t) {
      const std::complex<double> zeta = z0 + std::polar(r, t);
      const std::complex<double> z = zeta + cc / zeta;
      return Vec2(z.real(), z.imag());
    };
    // z = R w + zeta_c + O(1/w), so the conformal center is the circle center
    c.conformal_center = jk.offset;
  }
  return c;
}

}  // namespace

BodyBoundary make_body(const ShapeSpec& spec, int n_panels) {
  if (n_panels < 4) throw ValidationError("panel count too small (need N >= 4)");
  const ParamCurve curve = curve_for(spec);
  const double two_pi = 2.0 * M_PI;

  // cumulative arc length on a dense sampling, then invert to uniform
  // arc-length node parameters
  const int dense = std::max(4096, 32 * n_panels);
  std::vector<double> ts(dense + 1), s(dense + 1, 0.0);
  Vec2 prev = curve.at(0.0);
  ts[0] = 0.0;
  for (int i = 1; i <= dense; ++i) {
    ts[i] = two_pi * i / dense;
    const Vec2 p = curve.at(ts[i]);
    s[i] = s[i - 1] + (p - prev).norm();
    prev = p;
  }
  const double total = s[dense];
  if (!(total > 0.0)) throw ValidationError("degenerate shape: zero perimeter");

  std::vector<Vec2> nodes(n_panels);
  int k = 0;
  for (int i = 0; i < n_panels; ++i) {
    const double target = total * i / n_panels;
    while (k < dense && s[k + 1] < target) ++k;
    const double seg = s[k + 1] - s[k];
    const double w = seg > 0.0 ? (target - s[k]) / seg : 0.0;
    const double t = ts[k] + w * (ts[k + 1] - ts[k]);
    nodes[i] = curve.at(t) - curve.conformal_center;
  }
  return BodyBoundary(std::move(nodes));
}

void write_nodes(const BodyBoundary& body, std::ostream& out) {
  char buf[80];
  for (const Vec2& p : body.nodes()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
}

RigidMass rigid_mass(const BodyBoundary& body, double rho) {
  if (!(rho > 0.0)) throw ValidationError("density must be positive");
  RigidMass rm;
  rm.m = rho * body.area();
  // exact second polygon moment about the origin
  double acc = 0.0;
  const auto& nodes = body.nodes();
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = nodes[i];
    const Vec2& q = nodes[(i + 1) % n];
    const double c = p.x() * q.y() - q.x() * p.y();
    acc += c * (p.x() * p.x() + p.x() * q.x() + q.x() * q.x() +
                p.y() * p.y() + p.y() * q.y() + q.y() * q.y());
  }
  rm.inertia = rho * acc / 12.0;
  rm.Mb = Mat3::Zero();
  rm.Mb(0, 0) = rm.inertia;
  rm.Mb(1, 1) = rm.m;
  rm.Mb(2, 2) = rm.m;
  return rm;
}

}  // namespace circ

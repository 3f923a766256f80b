#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "circ/errors.hpp"
#include "circ/se2.hpp"

namespace circ {

struct CircleSpec {
  double radius = 1.0;
};

struct EllipseSpec {
  double a = 1.0;  // semi-axis along x
  double b = 1.0;  // semi-axis along y
};

/// Image of the circle |zeta - offset| = circle_radius under
/// z = zeta + c^2 / zeta.
struct JoukowskiSpec {
  double circle_radius = 1.1;
  Vec2 offset = Vec2(-0.1, 0.0);
  double c = 1.0;
};

using ShapeSpec = std::variant<CircleSpec, EllipseSpec, JoukowskiSpec>;

struct Panel {
  Vec2 a, b;       // endpoints, counterclockwise order
  Vec2 mid;
  Vec2 normal;     // outward unit normal
  Vec2 tangent;    // unit tangent, counterclockwise
  double length = 0.0;
};

/// Closed counterclockwise polygonal body contour with derived panels.
/// Immutable after construction.
class BodyBoundary {
 public:
  /// Validates closedness, simplicity and positive area; reverses the
  /// node order if it comes in clockwise.
  explicit BodyBoundary(std::vector<Vec2> nodes,
                        const Vec2& conformal_center_offset = Vec2::Zero());

  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<Panel>& panels() const { return panels_; }
  std::size_t panel_count() const { return panels_.size(); }

  double area() const { return area_; }
  double perimeter() const { return perimeter_; }
  const Vec2& centroid() const { return centroid_; }
  /// Bounding-box diagonal, used as the length scale for tolerances.
  double diameter() const { return diameter_; }
  const Vec2& conformal_center_offset() const { return conformal_center_offset_; }

  bool contains(const Vec2& x) const;

 private:
  std::vector<Vec2> nodes_;
  std::vector<Panel> panels_;
  double area_ = 0.0;
  double perimeter_ = 0.0;
  double diameter_ = 0.0;
  Vec2 centroid_ = Vec2::Zero();
  Vec2 conformal_center_offset_ = Vec2::Zero();
};

/// Builds a discretized boundary with nodes approximately uniform in arc
/// length and the conformal center at the body-frame origin.
BodyBoundary make_body(const ShapeSpec& spec, int n_panels);

/// Two-column "x y" node list.
void write_nodes(const BodyBoundary& body, std::ostream& out);

struct RigidMass {
  double m = 0.0;        // rho * area
  double inertia = 0.0;  // about the body-frame origin
  Mat3 Mb = Mat3::Zero();
};

/// Neutrally buoyant rigid inertia from exact polygon moments.
RigidMass rigid_mass(const BodyBoundary& body, double rho);

}  // namespace circ

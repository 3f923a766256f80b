#pragma once

#include <array>
#include <string>
#include <vector>

#include "circ/geometry.hpp"
#include "circ/se2.hpp"

namespace circ {

/// Solution of one exterior Neumann problem in source-panel form.
struct NeumannSolution {
  const BodyBoundary* body = nullptr;
  Eigen::VectorXd source_strengths;  // per-panel sigma
  Eigen::VectorXd phi_boundary;      // collocation values, zero boundary mean
  Eigen::VectorXd neumann_data;      // prescribed normal velocity
  std::string label;
};

/// Constant-strength source panels with midpoint collocation.
class PanelSolver {
 public:
  explicit PanelSolver(const BodyBoundary& body);

  const BodyBoundary& body() const { return *body_; }

  /// Solves for the source densities matching the given per-panel normal
  /// velocity. Rejects data with nonzero net boundary flux.
  NeumannSolution solve(const Eigen::VectorXd& normal_data, std::string label) const;

  /// Velocity at an arbitrary field point induced by a source distribution.
  Vec2 induced_velocity(const Eigen::VectorXd& sigma, const Vec2& x) const;

  /// Potential at the collocation points (self terms handled analytically).
  Eigen::VectorXd boundary_potential(const Eigen::VectorXd& sigma) const;

  const Eigen::MatrixXd& normal_influence() const { return normal_influence_; }

 private:
  const BodyBoundary* body_;
  Eigen::MatrixXd normal_influence_;     // collocation normal velocity per unit sigma
  Eigen::MatrixXd potential_influence_;  // collocation potential per unit sigma
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

struct MassModel {
  Mat3 Mb = Mat3::Zero();
  Mat3 Mf = Mat3::Zero();
  Mat3 M = Mat3::Zero();
  double rho = 1.0;
  double asymmetry = 0.0;  // relative Mf asymmetry before symmetrization

  static MassModel from_parts(const Mat3& Mb, const Mat3& Mf, double rho);
};

struct KirchhoffPotentials {
  NeumannSolution omega, x, y;
};

/// The three unit-motion problems: data (X x n).b3, n.b1, n.b2.
KirchhoffPotentials kirchhoff_potentials(const PanelSolver& solver);
KirchhoffPotentials kirchhoff_potentials(const BodyBoundary& body);

/// Total mass model M = Mb + Mf; Mf from boundary energy integrals of the
/// Kirchhoff potentials, symmetrized.
MassModel added_mass(const BodyBoundary& body, double rho);
MassModel added_mass(const PanelSolver& solver, double rho);

/// Circulatory boundary flow: a point vortex of strength gamma at the
/// conformal center plus a source-panel correction cancelling its normal
/// component on the boundary.
struct CirculatoryFlow {
  double gamma = 0.0;
  std::vector<Vec2> midpoints;         // collocation points, copied so the
                                       // flow outlives the boundary object
  Eigen::VectorXd lengths;             // per-panel arc weights
  std::vector<Vec2> tangents;          // ccw unit tangents at the midpoints
  Eigen::VectorXd tangential_speed;    // per panel, along the ccw tangent
  Eigen::VectorXd vortex_tangential;   // tangential part of the bare vortex
  Eigen::VectorXd phi_correction;      // boundary potential of the correction
  Eigen::VectorXd source_strengths;    // correction panels

  /// Loop integral of f * alpha_Gamma over the boundary, with f sampled at
  /// panel midpoints (f = 1 recovers the circulation).
  double boundary_moment(const std::vector<double>& f_mid) const;
  double circulation() const;
};

CirculatoryFlow circulatory_flow(const PanelSolver& solver, double gamma);
CirculatoryFlow circulatory_flow(const BodyBoundary& body, double gamma);

/// Bundled evaluator for u = grad Phi_zeta + u_Gamma.
class FlowModel {
 public:
  explicit FlowModel(const BodyBoundary& body);

  const PanelSolver& solver() const { return solver_; }
  const KirchhoffPotentials& potentials() const { return potentials_; }

  Vec2 velocity(const Se2Vector& zeta, double gamma, const Vec2& x) const;

  /// Throws if any query point is inside the body.
  std::vector<Vec2> velocity_field(const Se2Vector& zeta, double gamma,
                                   const std::vector<Vec2>& points) const;

 private:
  PanelSolver solver_;
  KirchhoffPotentials potentials_;
  mutable double cached_gamma_ = 0.0;
  mutable bool have_circ_ = false;
  mutable CirculatoryFlow circ_;
};

std::vector<Vec2> velocity_field(const BodyBoundary& body, const Se2Vector& zeta,
                                 double gamma, const std::vector<Vec2>& points);

/// Boundary integral -oint alpha_Gamma ^ *(dPsi_1 ^ dPsi_2) for the pair of
/// rigid motions (zeta1, zeta2).
double curvature_gamma(const CirculatoryFlow& flow, const Se2Vector& zeta1,
                       const Se2Vector& zeta2);
double curvature_gamma(const BodyBoundary& body, double gamma,
                       const Se2Vector& zeta1, const Se2Vector& zeta2);

}  // namespace circ

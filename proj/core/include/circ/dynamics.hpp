#pragma once

#include <vector>

#include "circ/poisson.hpp"
#include "circ/potential.hpp"
#include "circ/se2.hpp"

namespace circ {

enum class IntegratorKind { Rk4, ImplicitMidpoint };
enum class PhaseSpaceKind { Se2Magnetic, Osc };

struct SimConfig {
  MassModel mass;
  double gamma = 0.0;
  double dt = 1e-3;
  long steps = 1000;
  IntegratorKind integrator = IntegratorKind::ImplicitMidpoint;
  Se2Momentum pi0;
  Se2Element g0;
  PhaseSpaceKind space = PhaseSpaceKind::Se2Magnetic;
  double p0 = 0.0;  // extension level, osc space only
};

struct TrajectorySample {
  double t = 0.0;
  Se2Momentum pi;
  double p = 0.0;            // osc extension coordinate (Gamma otherwise)
  Se2Element pose;
  double hamiltonian = 0.0;
  double casimir = 0.0;      // verified coefficient; NaN at Gamma = 0
  Vec2 spatial_momentum = Vec2::Zero();  // R_theta P
  Vec2 kz_force = Vec2::Zero();
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

/// Chaplygin-Lamb right-hand side: zeta = M^-1 pi, Pidot = Px Vy - Py Vx,
/// Pdot = Omega J^T P + Gamma b3 x V.
Se2Momentum eom_rhs(const Se2Momentum& pi, const MassModel& mass, double gamma);

/// Oscillator lift: pi-part with Gamma replaced by the level p, pdot = 0.
OscMomentum eom_rhs_osc(const OscMomentum& nu, const MassModel& mass);

double hamiltonian(const Se2Momentum& pi, const MassModel& mass);
double hamiltonian_osc(const OscMomentum& nu, const MassModel& mass);

/// Gyroscopic lift Gamma b3 x V with V from M^-1 pi.
Vec2 kutta_zhukowski_force(const Se2Momentum& pi, const MassModel& mass, double gamma);

/// One fixed step of the configured scheme on the momentum equation.
Se2Momentum step(const Se2Momentum& pi, const SimConfig& config, long step_index);

/// Full run: momentum integration, pose reconstruction and per-sample
/// diagnostics (H, verified Casimir, spatial momentum, Kutta-Zhukowski force).
Trajectory integrate(const SimConfig& config);

/// Second-order group reconstruction g_{k+1} = g_k exp(zeta_{k+1/2} dt) with
/// the midpoint body velocity from consecutive momenta.
std::vector<Se2Element> reconstruct_pose(const std::vector<Se2Momentum>& momenta,
                                         const MassModel& mass,
                                         const Se2Element& initial_pose, double dt);

/// Closed-form solution for an isotropic total mass matrix
/// M = diag(I, m, m): Pi and |P| constant, P rotating at Omega - Gamma/m,
/// center path a circle of radius |P|/|Gamma| (straight line at Gamma = 0).
struct IsotropicSolution {
  Se2Momentum pi0;
  Se2Element g0;
  double m = 1.0, inertia = 1.0, gamma = 0.0;

  Se2Momentum momentum(double t) const;
  Se2Element pose(double t) const;
  /// Period of the momentum rotation; infinity when the rate vanishes.
  double period() const;
  double center_radius() const;  // requires Gamma != 0
  Vec2 center_of_circle() const;
};

IsotropicSolution analytic_isotropic(const Se2Momentum& pi0, const Se2Element& g0,
                                     const MassModel& mass, double gamma);

/// Trajectory text export: header row and 17-significant-digit columns
/// t, Pi, Px, Py, theta, x0, y0, H, Casimir, Fx_KZ, Fy_KZ.
void write_trajectory(const Trajectory& traj, std::ostream& out);

}  // namespace circ

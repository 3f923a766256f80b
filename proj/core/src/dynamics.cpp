#include "circ/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "circ/errors.hpp"

namespace circ {

namespace {

Mat3 checked_inverse(const Mat3& m) {
  Eigen::LLT<Mat3> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericError("mass matrix is not positive definite");
  }
  return llt.solve(Mat3::Identity());
}

Se2Momentum rhs_from_inverse(const Se2Momentum& pi, const Mat3& minv, double gamma) {
  const Vec3 zeta = minv * pi.as_vec3();
  const double omega = zeta[0];
  const Vec2 v(zeta[1], zeta[2]);
  const Vec2& p = pi.lin;
  return {p.x() * v.y() - p.y() * v.x(),
          Vec2(omega * p.y() - gamma * v.y(), -omega * p.x() + gamma * v.x())};
}

Se2Momentum rk4_step(const Se2Momentum& pi, const Mat3& minv, double gamma, double dt) {
  const Se2Momentum k1 = rhs_from_inverse(pi, minv, gamma);
  const Se2Momentum k2 = rhs_from_inverse(pi + k1 * (0.5 * dt), minv, gamma);
  const Se2Momentum k3 = rhs_from_inverse(pi + k2 * (0.5 * dt), minv, gamma);
  const Se2Momentum k4 = rhs_from_inverse(pi + k3 * dt, minv, gamma);
  return pi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

Se2Momentum midpoint_step(const Se2Momentum& pi, const Mat3& minv, double gamma,
                          double dt, long step_index) {
  // fixed point for the stage value pi_mid = pi + (dt/2) f(pi_mid)
  Se2Momentum mid = pi + rhs_from_inverse(pi, minv, gamma) * (0.5 * dt);
  const double tol = 1e-13 * (1.0 + pi.as_vec3().norm());
  for (int it = 0; it < 50; ++it) {
    const Se2Momentum next = pi + rhs_from_inverse(mid, minv, gamma) * (0.5 * dt);
    const double delta = (next.as_vec3() - mid.as_vec3()).norm();
    mid = next;
    if (delta < tol) {
      return pi + rhs_from_inverse(mid, minv, gamma) * dt;
    }
  }
  std::ostringstream os;
  os << "implicit midpoint failed to converge at step " << step_index;
  throw NumericError(os.str());
}

}  // namespace

Se2Momentum eom_rhs(const Se2Momentum& pi, const MassModel& mass, double gamma) {
  return rhs_from_inverse(pi, checked_inverse(mass.M), gamma);
}

OscMomentum eom_rhs_osc(const OscMomentum& nu, const MassModel& mass) {
  return {eom_rhs(nu.pi, mass, nu.p), 0.0};
}

double hamiltonian(const Se2Momentum& pi, const MassModel& mass) {
  const Vec3 v = pi.as_vec3();
  return 0.5 * v.dot(checked_inverse(mass.M) * v);
}

double hamiltonian_osc(const OscMomentum& nu, const MassModel& mass) {
  return hamiltonian(nu.pi, mass) + 0.5 * nu.p * nu.p;
}

Vec2 kutta_zhukowski_force(const Se2Momentum& pi, const MassModel& mass, double gamma) {
  const Vec3 zeta = checked_inverse(mass.M) * pi.as_vec3();
  return gamma * b3_cross(Vec2(zeta[1], zeta[2]));
}

Se2Momentum step(const Se2Momentum& pi, const SimConfig& config, long step_index) {
  const Mat3 minv = checked_inverse(config.mass.M);
  const double level = config.space == PhaseSpaceKind::Osc ? config.p0 : config.gamma;
  return config.integrator == IntegratorKind::Rk4
             ? rk4_step(pi, minv, level, config.dt)
             : midpoint_step(pi, minv, level, config.dt, step_index);
}

std::vector<Se2Element> reconstruct_pose(const std::vector<Se2Momentum>& momenta,
                                         const MassModel& mass,
                                         const Se2Element& initial_pose, double dt) {
  const Mat3 minv = checked_inverse(mass.M);
  std::vector<Se2Element> poses;
  poses.reserve(momenta.size());
  poses.push_back(initial_pose);
  for (std::size_t k = 0; k + 1 < momenta.size(); ++k) {
    const Vec3 mid = 0.5 * minv * (momenta[k].as_vec3() + momenta[k + 1].as_vec3());
    poses.push_back(compose(poses.back(), exp(Se2Vector::from_vec3(mid), dt)));
  }
  return poses;
}

Trajectory integrate(const SimConfig& config) {
  if (!(config.dt > 0.0)) throw ValidationError("time step must be positive");
  if (config.steps < 0) throw ValidationError("step count must be nonnegative");
  const Mat3 minv = checked_inverse(config.mass.M);
  const double level = config.space == PhaseSpaceKind::Osc ? config.p0 : config.gamma;

  std::vector<Se2Momentum> momenta;
  momenta.reserve(static_cast<std::size_t>(config.steps) + 1);
  momenta.push_back(config.pi0);
  for (long k = 0; k < config.steps; ++k) {
    momenta.push_back(config.integrator == IntegratorKind::Rk4
                          ? rk4_step(momenta.back(), minv, level, config.dt)
                          : midpoint_step(momenta.back(), minv, level, config.dt, k));
  }
  const std::vector<Se2Element> poses =
      reconstruct_pose(momenta, config.mass, config.g0, config.dt);

  Trajectory traj;
  traj.samples.resize(momenta.size());
  for (std::size_t k = 0; k < momenta.size(); ++k) {
    TrajectorySample& s = traj.samples[k];
    s.t = config.dt * static_cast<double>(k);
    s.pi = momenta[k];
    s.p = level;
    s.pose = poses[k];
    const Vec3 v = s.pi.as_vec3();
    s.hamiltonian = 0.5 * v.dot(minv * v);
    if (config.space == PhaseSpaceKind::Osc) s.hamiltonian += 0.5 * level * level;
    s.casimir = level != 0.0
                    ? casimir_magnetic(s.pi, level, NormalizationMode::Verified)
                    : std::numeric_limits<double>::quiet_NaN();
    s.spatial_momentum = s.pose.rot() * s.pi.lin;
    const Vec3 zeta = minv * v;
    s.kz_force = level * b3_cross(Vec2(zeta[1], zeta[2]));
  }
  return traj;
}

namespace {

bool is_isotropic(const Mat3& m) {
  Mat3 off = m;
  off.diagonal().setZero();
  return off.norm() < 1e-12 * m.norm() &&
         std::abs(m(1, 1) - m(2, 2)) < 1e-12 * m.norm();
}

}  // namespace

Se2Momentum IsotropicSolution::momentum(double t) const {
  const double omega = pi0.ang / inertia;
  const double rate = omega - gamma / m;  // P rotates at -rate in the J sense
  return {pi0.ang, Vec2(rotation(-rate * t) * pi0.lin)};
}

Se2Element IsotropicSolution::pose(double t) const {
  const double omega = pi0.ang / inertia;
  const double theta = g0.theta() + omega * t;
  Vec2 x0;
  if (gamma == 0.0) {
    x0 = g0.translation() + (t / m) * (rotation(g0.theta()) * pi0.lin);
  } else {
    Mat2 kt;  // inverse of d/dtheta R at 0
    kt << 0.0, 1.0, -1.0, 0.0;
    const Mat2 dr =
        rotation(g0.theta() + (gamma / m) * t) - rotation(g0.theta());
    x0 = g0.translation() + (1.0 / gamma) * (kt * (dr * pi0.lin));
  }
  return {theta, x0};
}

double IsotropicSolution::period() const {
  const double rate = pi0.ang / inertia - gamma / m;
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * M_PI / std::abs(rate);
}

double IsotropicSolution::center_radius() const {
  if (gamma == 0.0) throw ValidationError("center path is a line at zero circulation");
  return pi0.lin.norm() / std::abs(gamma);
}

Vec2 IsotropicSolution::center_of_circle() const {
  if (gamma == 0.0) throw ValidationError("center path is a line at zero circulation");
  Mat2 kt;
  kt << 0.0, 1.0, -1.0, 0.0;
  return g0.translation() - (1.0 / gamma) * (kt * (rotation(g0.theta()) * pi0.lin));
}

IsotropicSolution analytic_isotropic(const Se2Momentum& pi0, const Se2Element& g0,
                                     const MassModel& mass, double gamma) {
  if (!is_isotropic(mass.M)) {
    throw ValidationError("analytic solution requires an isotropic mass matrix");
  }
  IsotropicSolution sol;
  sol.pi0 = pi0;
  sol.g0 = g0;
  sol.inertia = mass.M(0, 0);
  sol.m = mass.M(1, 1);
  sol.gamma = gamma;
  return sol;
}

void write_trajectory(const Trajectory& traj, std::ostream& out) {
  out << "t Pi Px Py theta x0 y0 H Casimir Fx_KZ Fy_KZ\n";
  char buf[512];
  for (const TrajectorySample& s : traj.samples) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  s.t, s.pi.ang, s.pi.lin.x(), s.pi.lin.y(), s.pose.theta(),
                  s.pose.translation().x(), s.pose.translation().y(), s.hamiltonian,
                  s.casimir, s.kz_force.x(), s.kz_force.y());
    out << buf;
  }
}

}  // namespace circ

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "circ/dynamics.hpp"
#include "circ/errors.hpp"
#include "circ/poisson.hpp"

using namespace circ;

namespace {

MassModel mass_from_matrix(const Mat3& m) {
  return MassModel::from_parts(m, Mat3::Zero(), 1.0);
}

MassModel anisotropic_mass() {
  Mat3 m;
  m << 2.0, 0.1, 0.0, 0.1, 1.5, 0.05, 0.0, 0.05, 1.0;
  return mass_from_matrix(m);
}

}  // namespace

TEST_CASE("eom right-hand side: equilibrium, hand example and bracket cross-check") {
  const MassModel mass = mass_from_matrix(Mat3::Identity());
  CHECK(eom_rhs(Se2Momentum(), mass, 2.0).as_vec3().norm() == 0.0);

  // M = I, pi = (0, 1, 0), Gamma = 1 -> rate (0, 0, 1)
  const Se2Momentum rate = eom_rhs(Se2Momentum(0.0, 1.0, 0.0), mass, 1.0);
  CHECK((rate.as_vec3() - Vec3(0.0, 0.0, 1.0)).norm() < 1e-15);

  // generic pi and Gamma: rate = Lambda_magnetic(pi) grad H
  const MassModel am = anisotropic_mass();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Se2Momentum pi(u(rng), u(rng), u(rng));
    const double gamma = 2.0 * u(rng);
    const Vec3 grad_h = am.M.ldlt().solve(pi.as_vec3());  // grad of 0.5 pi^T M^-1 pi
    const Eigen::MatrixXd lam =
        structure_matrix(PoissonSpace::se2_magnetic(gamma), pi.as_vec3());
    const Vec3 expected = lam * grad_h;
    CHECK((eom_rhs(pi, am, gamma).as_vec3() - expected).norm() < 1e-13);
    // Gamma = 0 reduces to the plain Lie-Poisson (Kirchhoff) rate
    const Eigen::MatrixXd lam0 = structure_matrix(PoissonSpace::se2(), pi.as_vec3());
    CHECK((eom_rhs(pi, am, 0.0).as_vec3() - Vec3(lam0 * grad_h)).norm() < 1e-13);
  }

  CHECK_THROWS_AS(eom_rhs(Se2Momentum(1, 1, 1), mass_from_matrix(Mat3::Zero()), 0.0),
                  NumericError);
}

TEST_CASE("oscillator right-hand side fixes p and matches the magnetic rate") {
  const MassModel mass = anisotropic_mass();
  const OscMomentum nu(Se2Momentum(0.4, -0.7, 1.1), 1.7);
  const OscMomentum rate = eom_rhs_osc(nu, mass);
  CHECK(rate.p == 0.0);
  CHECK((rate.pi.as_vec3() - eom_rhs(nu.pi, mass, 1.7).as_vec3()).norm() == 0.0);
  // p = 0 is the Kirchhoff case
  const OscMomentum rate0 = eom_rhs_osc(OscMomentum(nu.pi, 0.0), mass);
  CHECK((rate0.pi.as_vec3() - eom_rhs(nu.pi, mass, 0.0).as_vec3()).norm() == 0.0);
}

TEST_CASE("hamiltonian quadratic form") {
  const MassModel mass = mass_from_matrix(Vec3(2.0, 1.0, 1.0).asDiagonal());
  CHECK(hamiltonian(Se2Momentum(), mass) == 0.0);
  CHECK(hamiltonian(Se2Momentum(2.0, 0.0, 0.0), mass) == doctest::Approx(1.0));
  const MassModel am = anisotropic_mass();
  const Se2Momentum pi(0.3, -0.8, 0.5);
  const Vec3 zeta = am.M.ldlt().solve(pi.as_vec3());
  CHECK(std::abs(hamiltonian(pi, am) - 0.5 * zeta.dot(am.M * zeta)) < 1e-14);
  CHECK(hamiltonian_osc(OscMomentum(pi, 2.0), am) ==
        doctest::Approx(hamiltonian(pi, am) + 2.0));
}

TEST_CASE("Kutta-Zhukowski force is the gyroscopic lift") {
  const MassModel mass = mass_from_matrix(Mat3::Identity());
  CHECK(kutta_zhukowski_force(Se2Momentum(0.0, 1.0, 0.0), mass, 0.0).norm() == 0.0);
  const Vec2 f = kutta_zhukowski_force(Se2Momentum(0.0, 1.0, 0.0), mass, 2.0);
  CHECK((f - Vec2(0.0, 2.0)).norm() < 1e-15);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Se2Momentum pi(u(rng), u(rng), u(rng));
    const double gamma = 2.0 * u(rng);
    const Vec3 zeta = mass.M.ldlt().solve(pi.as_vec3());
    const Vec2 v(zeta[1], zeta[2]);
    const Vec2 force = kutta_zhukowski_force(pi, mass, gamma);
    CHECK(std::abs(force.dot(v)) < 1e-13);
    CHECK(force.norm() == doctest::Approx(std::abs(gamma) * v.norm()));
  }
}

TEST_CASE("implicit midpoint conserves the quadratic invariants") {
  SimConfig cfg;
  cfg.mass = anisotropic_mass();
  cfg.gamma = 2.0;
  cfg.dt = 1e-3;
  cfg.steps = 10000;
  cfg.integrator = IntegratorKind::ImplicitMidpoint;
  cfg.pi0 = Se2Momentum(0.4, 1.0, -0.3);
  const Trajectory traj = integrate(cfg);
  const double h0 = traj.samples.front().hamiltonian;
  const double c0 = traj.samples.front().casimir;
  double h_drift = 0.0, c_drift = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    h_drift = std::max(h_drift, std::abs(s.hamiltonian - h0));
    c_drift = std::max(c_drift, std::abs(s.casimir - c0));
  }
  CHECK(h_drift / std::abs(h0) < 1e-10);
  CHECK(c_drift / std::max(1.0, std::abs(c0)) < 1e-10);
}

TEST_CASE("one step from equilibrium stays at equilibrium") {
  SimConfig cfg;
  cfg.mass = anisotropic_mass();
  cfg.gamma = 1.0;
  for (IntegratorKind kind : {IntegratorKind::Rk4, IntegratorKind::ImplicitMidpoint}) {
    cfg.integrator = kind;
    CHECK(step(Se2Momentum(), cfg, 0).as_vec3().norm() == 0.0);
  }
}

TEST_CASE("rk4 momentum error scales at fourth order") {
  const MassModel mass = mass_from_matrix(Vec3(2.0, 1.5, 1.5).asDiagonal());
  const double gamma = 2.0;
  const Se2Momentum pi0(0.8, 1.0, 0.2);
  const IsotropicSolution exact =
      analytic_isotropic(pi0, Se2Element::identity(), mass, gamma);
  const double T = 1.0;
  double errs[3];
  const double dts[3] = {1e-2, 5e-3, 2.5e-3};
  for (int k = 0; k < 3; ++k) {
    SimConfig cfg;
    cfg.mass = mass;
    cfg.gamma = gamma;
    cfg.dt = dts[k];
    cfg.steps = static_cast<long>(std::lround(T / dts[k]));
    cfg.integrator = IntegratorKind::Rk4;
    cfg.pi0 = pi0;
    const Trajectory traj = integrate(cfg);
    const Se2Momentum ref = exact.momentum(traj.samples.back().t);
    errs[k] = (traj.samples.back().pi.as_vec3() - ref.as_vec3()).norm();
  }
  const double slope = std::log(errs[0] / errs[2]) / std::log(4.0);
  CHECK(slope == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("pose reconstruction handles screw-free special cases") {
  const MassModel mass = mass_from_matrix(Mat3::Identity());
  // constant pure translation with a rotated initial frame
  const Se2Element g0(0.6, Vec2(1.0, 2.0));
  std::vector<Se2Momentum> momenta(11, Se2Momentum(0.0, 0.5, -0.2));
  std::vector<Se2Element> poses = reconstruct_pose(momenta, mass, g0, 0.1);
  const Vec2 v = rotation(0.6) * Vec2(0.5, -0.2);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    CHECK(poses[k].theta() == doctest::Approx(0.6));
    CHECK((poses[k].translation() - (g0.translation() + 0.1 * double(k) * v)).norm() <
          1e-13);
  }
  // constant pure rotation
  std::vector<Se2Momentum> spin(11, Se2Momentum(0.7, 0.0, 0.0));
  poses = reconstruct_pose(spin, mass, g0, 0.1);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    CHECK(poses[k].theta() == doctest::Approx(0.6 + 0.07 * double(k)));
    CHECK((poses[k].translation() - g0.translation()).norm() < 1e-13);
  }
}

TEST_CASE("analytic isotropic solution properties") {
  const MassModel mass = mass_from_matrix(Vec3(2.0, 1.5, 1.5).asDiagonal());
  const Se2Momentum pi0(0.6, 0.9, -0.4);
  CHECK_THROWS_AS(analytic_isotropic(pi0, Se2Element::identity(), anisotropic_mass(), 1.0),
                  ValidationError);

  // Gamma = m Omega freezes P
  const double omega = pi0.ang / mass.M(0, 0);
  const IsotropicSolution frozen =
      analytic_isotropic(pi0, Se2Element::identity(), mass, mass.M(1, 1) * omega);
  CHECK((frozen.momentum(3.7).lin - pi0.lin).norm() < 1e-12);

  const IsotropicSolution sol =
      analytic_isotropic(pi0, Se2Element(0.3, Vec2(1.0, -1.0)), mass, 2.0);
  for (double t : {0.0, 0.4, 2.9}) {
    CHECK(sol.momentum(t).lin.norm() == doctest::Approx(pi0.lin.norm()));
    CHECK(sol.momentum(t).ang == pi0.ang);
    // closed form satisfies the equations of motion (finite differences)
    const double h = 1e-6;
    const Vec3 fd =
        (sol.momentum(t + h).as_vec3() - sol.momentum(t - h).as_vec3()) / (2.0 * h);
    CHECK((fd - eom_rhs(sol.momentum(t), mass, 2.0).as_vec3()).norm() < 1e-8);
    const Vec2 xd = (sol.pose(t + h).translation() - sol.pose(t - h).translation()) /
                    (2.0 * h);
    const Vec3 zeta = mass.M.ldlt().solve(sol.momentum(t).as_vec3());
    CHECK((xd - sol.pose(t).rot() * Vec2(zeta[1], zeta[2])).norm() < 1e-8);
    // center path is the predicted circle
    CHECK((sol.pose(t).translation() - sol.center_of_circle()).norm() ==
          doctest::Approx(sol.center_radius()).epsilon(1e-12));
  }
}

TEST_CASE("numeric trajectory matches the analytic isotropic oracle") {
  const MassModel mass = mass_from_matrix(Vec3(2.0, 1.5, 1.5).asDiagonal());
  const Se2Momentum pi0(0.45, 0.8, 0.0);
  const double gamma = 1.0;
  const IsotropicSolution exact =
      analytic_isotropic(pi0, Se2Element::identity(), mass, gamma);
  SimConfig cfg;
  cfg.mass = mass;
  cfg.gamma = gamma;
  cfg.dt = 1e-3;
  cfg.steps = static_cast<long>(std::lround(exact.period() / cfg.dt));
  cfg.integrator = IntegratorKind::Rk4;
  cfg.pi0 = pi0;
  const Trajectory traj = integrate(cfg);
  double worst = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    worst = std::max(worst,
                     (s.pi.as_vec3() - exact.momentum(s.t).as_vec3()).norm());
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("spatial momentum is conserved in the Kirchhoff limit") {
  SimConfig cfg;
  cfg.mass = anisotropic_mass();
  cfg.gamma = 0.0;
  cfg.dt = 5e-5;
  cfg.steps = 10000;
  cfg.integrator = IntegratorKind::ImplicitMidpoint;
  cfg.pi0 = Se2Momentum(0.2, 1.0, 0.3);
  const Trajectory traj = integrate(cfg);
  const Vec2 ref = traj.samples.front().spatial_momentum;
  double worst = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    worst = std::max(worst, (s.spatial_momentum - ref).norm());
  }
  CHECK(worst / ref.norm() < 1e-10);
  CHECK(std::isnan(traj.samples.front().casimir));  // singular limit flagged
}

TEST_CASE("oscillator-space integration reproduces the magnetic dynamics") {
  SimConfig cfg;
  cfg.mass = anisotropic_mass();
  cfg.gamma = 1.3;
  cfg.dt = 1e-3;
  cfg.steps = 2000;
  cfg.integrator = IntegratorKind::ImplicitMidpoint;
  cfg.pi0 = Se2Momentum(0.4, -0.6, 0.9);
  const Trajectory magnetic = integrate(cfg);

  cfg.space = PhaseSpaceKind::Osc;
  cfg.p0 = 1.3;
  const Trajectory osc = integrate(cfg);
  double worst = 0.0;
  for (std::size_t k = 0; k < magnetic.samples.size(); ++k) {
    worst = std::max(worst, (magnetic.samples[k].pi.as_vec3() -
                             osc.samples[k].pi.as_vec3())
                                .norm());
  }
  CHECK(worst < 1e-12);  // identical right-hand side, roundoff only
  // osc Hamiltonian carries the p^2/2 offset
  CHECK(osc.samples.front().hamiltonian ==
        doctest::Approx(magnetic.samples.front().hamiltonian + 0.5 * 1.3 * 1.3));
}

TEST_CASE("trajectory samples sit on the leaf-energy intersection") {
  SimConfig cfg;
  cfg.mass = anisotropic_mass();
  cfg.gamma = -0.5;
  cfg.dt = 1e-3;
  cfg.steps = 5000;
  cfg.pi0 = Se2Momentum(0.1, 0.7, -0.2);
  const Trajectory traj = integrate(cfg);
  const double h0 = traj.samples.front().hamiltonian;
  const double c0 =
      casimir_magnetic(cfg.pi0, cfg.gamma, NormalizationMode::Verified);
  for (std::size_t k = 0; k < traj.samples.size(); k += 500) {
    const TrajectorySample& s = traj.samples[k];
    CHECK(std::abs(s.hamiltonian - h0) < 1e-10);
    CHECK(std::abs(casimir_magnetic(s.pi, cfg.gamma, NormalizationMode::Verified) -
                   c0) < 1e-10);
  }
}

TEST_CASE("trajectory export is headed, stable and 17-digit") {
  SimConfig cfg;
  cfg.mass = anisotropic_mass();
  cfg.gamma = 1.0;
  cfg.dt = 0.01;
  cfg.steps = 3;
  cfg.pi0 = Se2Momentum(0.1, 0.2, 0.3);
  const Trajectory traj = integrate(cfg);
  std::ostringstream a, b;
  write_trajectory(traj, a);
  write_trajectory(traj, b);
  const std::string text = a.str();
  CHECK(text == b.str());
  CHECK(text.rfind("t Pi Px Py theta x0 y0 H Casimir Fx_KZ Fy_KZ\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);  // header + 4 samples
}

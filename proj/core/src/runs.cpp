#include "circ/runs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "circ/dynamics.hpp"
#include "circ/errors.hpp"
#include "circ/potential.hpp"

namespace circ {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  // absolute output paths in the scenario override the output directory
  const std::string path =
      (std::filesystem::path(name).is_absolute() || dir.empty())
          ? name
          : dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  return out;
}

void print_matrix(std::ostream& out, const std::string& name, const Mat3& m) {
  out << name << ":\n";
  for (int i = 0; i < 3; ++i) {
    out << "  " << fmt(m(i, 0)) << " " << fmt(m(i, 1)) << " " << fmt(m(i, 2)) << "\n";
  }
}

std::string shape_name(const ShapeSpec& spec) {
  if (std::holds_alternative<CircleSpec>(spec)) return "circle";
  if (std::holds_alternative<EllipseSpec>(spec)) return "ellipse";
  return "joukowski";
}

}  // namespace

void run_simulate(const ScenarioFile& s, const std::string& out_dir) {
  const BodyBoundary body = make_body(s.shape, s.panels);
  const MassModel mass = added_mass(body, s.rho);
  const Trajectory traj = integrate(s.sim_config(mass));

  {
    std::ofstream out = open_out(out_dir, s.trajectory);
    write_trajectory(traj, out);
  }

  std::ofstream out = open_out(out_dir, s.summary);
  out << "shape: " << shape_name(s.shape) << "\n"
      << "panels: " << s.panels << "\n"
      << "rho: " << fmt(s.rho) << "\n"
      << "area: " << fmt(body.area()) << "\n";
  print_matrix(out, "M_b", mass.Mb);
  print_matrix(out, "M_f", mass.Mf);
  print_matrix(out, "M", mass.M);
  out << "Mf_asymmetry: " << fmt(mass.asymmetry) << "\n";

  const TrajectorySample& first = traj.samples.front();
  const TrajectorySample& last = traj.samples.back();
  double h_drift = 0.0, c_drift = 0.0;
  for (const TrajectorySample& smp : traj.samples) {
    h_drift = std::max(h_drift, std::abs(smp.hamiltonian - first.hamiltonian));
    if (std::isfinite(smp.casimir)) {
      c_drift = std::max(c_drift, std::abs(smp.casimir - first.casimir));
    }
  }
  out << "H_initial: " << fmt(first.hamiltonian) << "\n"
      << "H_final: " << fmt(last.hamiltonian) << "\n"
      << "H_max_drift: " << fmt(h_drift) << "\n"
      << "Casimir_initial: " << fmt(first.casimir) << "\n"
      << "Casimir_final: " << fmt(last.casimir) << "\n"
      << "Casimir_max_drift: " << fmt(c_drift) << "\n";
}

void run_leaves(const ScenarioFile& s, const std::string& out_dir) {
  const double level = s.extension_level();
  if (level == 0.0) {
    throw ValidationError("leaf slices need Gamma != 0 (singular limit)");
  }
  const BodyBoundary body = make_body(s.shape, s.panels);
  const MassModel mass = added_mass(body, s.rho);
  const Trajectory traj = integrate(s.sim_config(mass));

  std::ofstream out = open_out(out_dir, s.leaves);
  out << "# paraboloid traces: mode casimir Px Pi (Py = 0 slice)\n";
  const double px_scale = std::max(1.0, 2.0 * s.pi0.lin.norm());
  const int n_px = 81;
  for (int mode = 0; mode < 2; ++mode) {
    const double c = mode == 0 ? casimir_coefficient(NormalizationMode::Paper)
                               : casimir_coefficient(NormalizationMode::Verified);
    const char* name = mode == 0 ? "paper" : "verified";
    for (int k = 0; k < s.leaf_count; ++k) {
      const double phi =
          s.leaf_count == 1
              ? s.leaf_min
              : s.leaf_min + (s.leaf_max - s.leaf_min) * k / (s.leaf_count - 1);
      for (int i = 0; i < n_px; ++i) {
        const double px = -px_scale + 2.0 * px_scale * i / (n_px - 1);
        const double pi_val = phi - c * px * px / level;
        out << name << " " << fmt(phi) << " " << fmt(px) << " " << fmt(pi_val)
            << "\n";
      }
    }
  }
  out << "# trajectory samples: t Pi Px Py Casimir_verified\n";
  for (const TrajectorySample& smp : traj.samples) {
    out << "traj " << fmt(smp.t) << " " << fmt(smp.pi.ang) << " "
        << fmt(smp.pi.lin.x()) << " " << fmt(smp.pi.lin.y()) << " "
        << fmt(smp.casimir) << "\n";
  }
}

void run_field(const ScenarioFile& s, const std::string& out_dir) {
  const BodyBoundary body = make_body(s.shape, s.panels);
  const MassModel mass = added_mass(body, s.rho);
  const Trajectory traj = integrate(s.sim_config(mass));
  const FlowModel flow(body);
  const Mat3 minv = mass.M.ldlt().solve(Mat3::Identity());

  std::ofstream out = open_out(out_dir, s.field);
  out << "step t x y ux uy inside\n";
  for (long idx : s.field_steps) {
    if (idx < 0 || idx >= static_cast<long>(traj.samples.size())) {
      std::ostringstream os;
      os << "field step index " << idx << " outside trajectory range";
      throw ValidationError(os.str());
    }
    const TrajectorySample& smp = traj.samples[static_cast<std::size_t>(idx)];
    const Vec3 z = minv * smp.pi.as_vec3();
    const Se2Vector zeta(z[0], Vec2(z[1], z[2]));
    for (int iy = 0; iy < s.grid_n; ++iy) {
      for (int ix = 0; ix < s.grid_n; ++ix) {
        const double x =
            s.grid_min_x + (s.grid_max_x - s.grid_min_x) * ix / (s.grid_n - 1);
        const double y =
            s.grid_min_y + (s.grid_max_y - s.grid_min_y) * iy / (s.grid_n - 1);
        const Vec2 p(x, y);
        Vec2 u = Vec2::Zero();
        const bool inside = body.contains(p);
        if (!inside) u = flow.velocity(zeta, smp.p, p);
        out << idx << " " << fmt(smp.t) << " " << fmt(x) << " " << fmt(y) << " "
            << fmt(u.x()) << " " << fmt(u.y()) << " " << (inside ? 1 : 0) << "\n";
      }
    }
  }
}

void run_added_mass(const ScenarioFile& s, std::ostream& out) {
  const BodyBoundary body = make_body(s.shape, s.panels);
  const MassModel mass = added_mass(body, s.rho);
  out << "shape: " << shape_name(s.shape) << "\n"
      << "panels: " << s.panels << "\n";
  print_matrix(out, "M_b", mass.Mb);
  print_matrix(out, "M_f", mass.Mf);
  print_matrix(out, "M", mass.M);
  out << "[mass]\n";
  const char* names[3] = {"omega", "x", "y"};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out << "Mf_" << names[i] << names[j] << " = " << fmt(mass.Mf(i, j)) << "\n";
    }
  }
  out << "Mf_asymmetry = " << fmt(mass.asymmetry) << "\n"
      << "m = " << fmt(mass.Mb(1, 1)) << "\n"
      << "I = " << fmt(mass.Mb(0, 0)) << "\n";
}

namespace {

struct CheckLog {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, double residual, double tol) {
    const bool ok = residual < tol;
    out << "check " << name << ": residual " << fmt(residual) << " (tol " << fmt(tol)
        << ") " << (ok ? "PASS" : "FAIL") << "\n";
    if (!ok) ++failures;
  }

  void report(const std::string& name, double residual) {
    out << "report " << name << ": residual " << fmt(residual)
        << " (informational, paper mode)\n";
  }
};

double jacobi_suite(const PoissonSpace& space, std::uint64_t seed, bool corrupt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd pt(space.dim());
    for (int i = 0; i < pt.size(); ++i) pt[i] = u(rng);
    const QuadraticField f = QuadraticField::random(space.dim(), rng());
    const QuadraticField g = QuadraticField::random(space.dim(), rng());
    const QuadraticField h = QuadraticField::random(space.dim(), rng());
    worst = std::max(worst, corrupt ? jacobi_residual_corrupted(space, pt, f, g, h)
                                    : jacobi_residual(space, pt, f, g, h));
  }
  return worst;
}

double restriction_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double gamma = u(rng) > 0 ? 0.5 + std::abs(u(rng)) : -0.5 - std::abs(u(rng));
    const Se2Momentum pi(u(rng), u(rng), u(rng));
    const Eigen::MatrixXd lam =
        structure_matrix(PoissonSpace::se2_magnetic(gamma), pi.as_vec3());
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double osc =
            osc_coordinate_bracket(i, j, pi, gamma, NormalizationMode::Verified);
        worst = std::max(worst, std::abs(osc - lam(i, j)));
      }
    }
  }
  return worst;
}

double casimir_annihilation(NormalizationMode mode, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c = casimir_coefficient(mode);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double gamma = u(rng) > 0 ? 0.5 + std::abs(u(rng)) : -0.5 - std::abs(u(rng));
    const Eigen::Vector3d pt(u(rng), u(rng), u(rng));
    const Eigen::MatrixXd lam =
        structure_matrix(PoissonSpace::se2_magnetic(gamma), pt);
    const Eigen::Vector3d grad(1.0, 2.0 * c * pt[1] / gamma, 2.0 * c * pt[2] / gamma);
    for (int coord = 0; coord < 3; ++coord) {
      worst =
          std::max(worst, std::abs(grad.dot(lam * Eigen::Vector3d::Unit(coord))));
    }
  }
  return worst;
}

double affine_invariance(NormalizationMode mode, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double gamma = 2.0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Se2Element g(2.0 * u(rng), Vec2(u(rng), u(rng)));
    const Se2Momentum pi(u(rng), u(rng), u(rng));
    const Se2Momentum moved = affine_action(g, pi, gamma, mode);
    worst = std::max(worst, std::abs(casimir_magnetic(moved, gamma, mode) -
                                     casimir_magnetic(pi, gamma, mode)));
  }
  return worst;
}

double action_property(NormalizationMode mode, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double gamma = 2.0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Se2Element g(2.0 * u(rng), Vec2(u(rng), u(rng)));
    const Se2Element h(2.0 * u(rng), Vec2(u(rng), u(rng)));
    const Se2Momentum pi(u(rng), u(rng), u(rng));
    const Se2Momentum lhs = affine_action(g, affine_action(h, pi, gamma, mode), gamma, mode);
    const Se2Momentum rhs = affine_action(compose(g, h), pi, gamma, mode);
    worst = std::max(worst, (lhs.as_vec3() - rhs.as_vec3()).norm());
  }
  return worst;
}

double curvature_suite(const BodyBoundary& body, double gamma, std::uint64_t seed) {
  const CirculatoryFlow flow = circulatory_flow(body, gamma);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Se2Vector z1(u(rng), u(rng), u(rng));
    const Se2Vector z2(u(rng), u(rng), u(rng));
    const double u1 = z1.lin.norm(), u2 = z2.lin.norm();
    const double a1 = std::atan2(z1.lin.y(), z1.lin.x());
    const double a2 = std::atan2(z2.lin.y(), z2.lin.x());
    const double expected = -gamma * u1 * u2 * std::sin(a1 - a2);
    const double got = curvature_gamma(flow, z1, z2);
    const double scale = std::max(1e-12, std::abs(gamma) * u1 * u2);
    worst = std::max(worst, std::abs(got - expected) / scale);
  }
  return worst;
}

}  // namespace

int run_verify(const VerifyOptions& opt, std::ostream& report) {
  CheckLog log{report};
  report << "verification suite (seed " << opt.seed << ", default mode "
         << (opt.mode == NormalizationMode::Paper ? "paper" : "verified") << ")\n";

  log.check("jacobi_se2", jacobi_suite(PoissonSpace::se2(), opt.seed + 1, false), 1e-12);
  log.check("jacobi_se2_magnetic",
            jacobi_suite(PoissonSpace::se2_magnetic(2.0), opt.seed + 2,
                         opt.inject_defect),
            1e-12);
  log.check("jacobi_osc", jacobi_suite(PoissonSpace::osc(), opt.seed + 3, false), 1e-12);
  log.check("restriction_poisson", restriction_suite(opt.seed + 4), 1e-15);
  log.check("casimir_annihilation_verified",
            casimir_annihilation(NormalizationMode::Verified, opt.seed + 5), 1e-12);
  log.report("casimir_annihilation_paper",
             casimir_annihilation(NormalizationMode::Paper, opt.seed + 5));
  log.check("bg_potential_identity_verified",
            bg_potential_fd_residual(2.0, NormalizationMode::Verified, opt.seed + 6, 100),
            1e-6);
  log.report("bg_potential_identity_paper",
             bg_potential_fd_residual(2.0, NormalizationMode::Paper, opt.seed + 6, 100));
  log.check("affine_casimir_invariance",
            affine_invariance(NormalizationMode::Verified, opt.seed + 7), 1e-12);
  log.check("action_property_verified",
            action_property(NormalizationMode::Verified, opt.seed + 8), 1e-12);
  log.report("action_property_paper",
             action_property(NormalizationMode::Paper, opt.seed + 8));

  {
    const BodyBoundary circle = make_body(CircleSpec{1.0}, 512);
    log.check("curvature_circle", curvature_suite(circle, 1.0, opt.seed + 9), 1e-3);
    const BodyBoundary foil =
        make_body(JoukowskiSpec{1.4, Vec2(-0.2, 0.12), 1.0}, 512);
    log.check("curvature_joukowski", curvature_suite(foil, -1.5, opt.seed + 10), 1e-3);
  }
  {
    const MassModel circle = added_mass(make_body(CircleSpec{1.0}, 256), 1.0);
    const Mat3 target = (Eigen::Vector3d(0.0, M_PI, M_PI)).asDiagonal();
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        worst = std::max(worst, std::abs(circle.Mf(i, j) - target(i, j)) / M_PI);
      }
    }
    log.check("added_mass_circle", worst, 0.01);
  }
  {
    const MassModel ell = added_mass(make_body(EllipseSpec{2.0, 1.0}, 256), 1.0);
    const Mat3 target =
        (Eigen::Vector3d(9.0 * M_PI / 8.0, M_PI, 4.0 * M_PI)).asDiagonal();
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        worst = std::max(worst,
                         std::abs(ell.Mf(i, j) - target(i, j)) / target.diagonal().maxCoeff());
      }
    }
    log.check("added_mass_ellipse", worst, 0.02);
  }

  const Normalization& n = normalization();
  report << "factor-tension casimir_coefficient: paper " << fmt(n.casimir_paper)
         << " verified " << fmt(n.casimir_verified) << " ratio "
         << fmt(n.casimir_paper / n.casimir_verified) << "\n";
  report << "factor-tension cocycle_scale: paper " << fmt(n.cocycle_paper)
         << " verified " << fmt(n.cocycle_verified) << " ratio "
         << fmt(n.cocycle_paper / n.cocycle_verified) << "\n";
  report << "factor-tension psi_scale: paper (" << fmt(n.psi_omega_paper) << ", "
         << fmt(n.psi_v_paper) << ") verified (" << fmt(n.psi_omega_verified) << ", "
         << fmt(n.psi_v_verified) << ") ratio ("
         << fmt(n.psi_omega_paper / n.psi_omega_verified) << ", "
         << fmt(n.psi_v_paper / n.psi_v_verified) << ")\n";
  report << "coframe_expansion_residual: " << fmt(n.coframe_expansion_residual) << "\n";

  report << (log.failures == 0 ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT")
         << " (" << log.failures << " failures)\n";
  return log.failures == 0 ? 0 : 1;
}

}  // namespace circ

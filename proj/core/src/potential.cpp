#include "circ/potential.hpp"

#include <cmath>
#include <sstream>

#include "circ/errors.hpp"

namespace circ {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Unit-strength source panel, local-frame field values at (lx, ly)
// relative to the panel start; panel lies on [0, L] of the local x-axis.
struct PanelField {
  double phi;
  double vt, vn;
};

PanelField source_panel_field(double lx, double ly, double len) {
  const double u0 = lx, u1 = lx - len;
  const double r0sq = u0 * u0 + ly * ly;
  const double r1sq = u1 * u1 + ly * ly;
  PanelField f{};
  auto anti = [&](double u) {
    double v = 0.0;
    const double rsq = u * u + ly * ly;
    if (rsq > 0.0) v = u * std::log(rsq) - 2.0 * u;
    if (ly != 0.0) v += 2.0 * ly * std::atan(u / ly);
    return v;
  };
  f.phi = (anti(u0) - anti(u1)) / (2.0 * kTwoPi);
  f.vt = std::log(r0sq / r1sq) / (2.0 * kTwoPi);
  f.vn = (std::atan2(ly, u1) - std::atan2(ly, u0)) / kTwoPi;
  return f;
}

}  // namespace

PanelSolver::PanelSolver(const BodyBoundary& body) : body_(&body) {
  const auto& panels = body.panels();
  const int n = static_cast<int>(panels.size());
  normal_influence_.resize(n, n);
  potential_influence_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec2& x = panels[i].mid;
    for (int j = 0; j < n; ++j) {
      const Panel& pj = panels[j];
      if (i == j) {
        // self terms: phi integrated analytically over the flat panel; the
        // exterior normal velocity is sigma/2 plus a boundary-curvature
        // correction kappa*L/(4*pi), with kappa*L estimated from the turn
        // angles at the panel end nodes
        const double L = pj.length;
        const Panel& prev = panels[(j + n - 1) % n];
        const Panel& next = panels[(j + 1) % n];
        auto turn = [](const Vec2& t0, const Vec2& t1) {
          return std::atan2(t0.x() * t1.y() - t0.y() * t1.x(), t0.dot(t1));
        };
        const double kappa_l =
            0.5 * (turn(prev.tangent, pj.tangent) + turn(pj.tangent, next.tangent));
        potential_influence_(i, j) = (L / kTwoPi) * (std::log(0.5 * L) - 1.0);
        normal_influence_(i, j) = 0.5 + kappa_l / (2.0 * kTwoPi);
        continue;
      }
      const Vec2 d = x - pj.a;
      const PanelField f =
          source_panel_field(d.dot(pj.tangent), d.dot(pj.normal), pj.length);
      potential_influence_(i, j) = f.phi;
      // Nystrom rule for the normal-derivative kernel: point value at the
      // collocation pair times the panel length; tracks the underlying
      // smooth contour and keeps the solve second-order accurate
      const Vec2 r = x - pj.mid;
      normal_influence_(i, j) =
          pj.length * r.dot(panels[i].normal) / (kTwoPi * r.squaredNorm());
    }
  }
  qr_.compute(normal_influence_);
  if (qr_.rank() < n - 1) {
    throw NumericError(
        "singular influence matrix; increase the panel count or use a "
        "non-degenerate geometry");
  }
}

NeumannSolution PanelSolver::solve(const Eigen::VectorXd& normal_data,
                                   std::string label) const {
  const auto& panels = body_->panels();
  const int n = static_cast<int>(panels.size());
  if (normal_data.size() != n) throw ValidationError("neumann data size mismatch");

  double flux = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    flux += normal_data[i] * panels[i].length;
    scale += std::abs(normal_data[i]) * panels[i].length;
  }
  if (std::abs(flux) > 1e-8 * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "incompatible neumann data: net boundary flux " << flux
       << " (must vanish for the exterior problem)";
    throw ValidationError(os.str());
  }

  NeumannSolution sol;
  sol.body = body_;
  sol.neumann_data = normal_data;
  sol.label = std::move(label);
  sol.source_strengths = qr_.solve(normal_data);
  sol.phi_boundary = boundary_potential(sol.source_strengths);
  return sol;
}

Eigen::VectorXd PanelSolver::boundary_potential(const Eigen::VectorXd& sigma) const {
  Eigen::VectorXd phi = potential_influence_ * sigma;
  // fix the free additive constant: zero length-weighted boundary mean
  const auto& panels = body_->panels();
  double mean = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) mean += phi[i] * panels[i].length;
  mean /= body_->perimeter();
  phi.array() -= mean;
  return phi;
}

Vec2 PanelSolver::induced_velocity(const Eigen::VectorXd& sigma, const Vec2& x) const {
  Vec2 u = Vec2::Zero();
  for (std::size_t j = 0; j < body_->panels().size(); ++j) {
    const Panel& pj = body_->panels()[j];
    const Vec2 d = x - pj.a;
    const PanelField f =
        source_panel_field(d.dot(pj.tangent), d.dot(pj.normal), pj.length);
    u += sigma[static_cast<int>(j)] * (f.vt * pj.tangent + f.vn * pj.normal);
  }
  return u;
}

MassModel MassModel::from_parts(const Mat3& Mb, const Mat3& Mf, double rho) {
  MassModel m;
  m.Mb = Mb;
  m.Mf = 0.5 * (Mf + Mf.transpose());
  m.M = m.Mb + m.Mf;
  m.rho = rho;
  const double denom = std::max(Mf.norm(), 1e-300);
  m.asymmetry = (Mf - Mf.transpose()).norm() / denom;
  return m;
}

KirchhoffPotentials kirchhoff_potentials(const PanelSolver& solver) {
  const auto& panels = solver.body().panels();
  const int n = static_cast<int>(panels.size());
  Eigen::VectorXd d_omega(n), d_x(n), d_y(n);
  for (int i = 0; i < n; ++i) {
    const Panel& p = panels[i];
    d_omega[i] = p.mid.x() * p.normal.y() - p.mid.y() * p.normal.x();
    d_x[i] = p.normal.x();
    d_y[i] = p.normal.y();
  }
  KirchhoffPotentials k;
  k.omega = solver.solve(d_omega, "Phi_Omega");
  k.x = solver.solve(d_x, "Phi_x");
  k.y = solver.solve(d_y, "Phi_y");
  return k;
}

KirchhoffPotentials kirchhoff_potentials(const BodyBoundary& body) {
  return kirchhoff_potentials(PanelSolver(body));
}

MassModel added_mass(const PanelSolver& solver, double rho) {
  const KirchhoffPotentials k = kirchhoff_potentials(solver);
  const auto& panels = solver.body().panels();
  const std::array<const NeumannSolution*, 3> sols = {&k.omega, &k.x, &k.y};
  Mat3 mf = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < panels.size(); ++q) {
        acc += sols[i]->phi_boundary[static_cast<int>(q)] *
               sols[j]->neumann_data[static_cast<int>(q)] * panels[q].length;
      }
      // boundary energy integral with the fluid-side normal orientation
      mf(i, j) = -rho * acc;
    }
  }
  const RigidMass rm = rigid_mass(solver.body(), rho);
  return MassModel::from_parts(rm.Mb, mf, rho);
}

MassModel added_mass(const BodyBoundary& body, double rho) {
  return added_mass(PanelSolver(body), rho);
}

namespace {

Vec2 vortex_velocity(double gamma, const Vec2& x) {
  const double r2 = x.squaredNorm();
  return (gamma / (kTwoPi * r2)) * b3_cross(x);
}

}  // namespace

CirculatoryFlow circulatory_flow(const PanelSolver& solver, double gamma) {
  const auto& panels = solver.body().panels();
  const int n = static_cast<int>(panels.size());
  CirculatoryFlow flow;
  flow.gamma = gamma;
  flow.midpoints.resize(panels.size());
  flow.tangents.resize(panels.size());
  flow.lengths = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    flow.midpoints[static_cast<std::size_t>(i)] = panels[i].mid;
    flow.tangents[static_cast<std::size_t>(i)] = panels[i].tangent;
    flow.lengths[i] = panels[i].length;
  }
  flow.tangential_speed = Eigen::VectorXd::Zero(n);
  flow.vortex_tangential = Eigen::VectorXd::Zero(n);
  flow.phi_correction = Eigen::VectorXd::Zero(n);
  flow.source_strengths = Eigen::VectorXd::Zero(n);
  if (gamma == 0.0) return flow;

  Eigen::VectorXd data(n);
  for (int i = 0; i < n; ++i) {
    data[i] = -vortex_velocity(gamma, panels[i].mid).dot(panels[i].normal);
  }
  // remove the quadrature remnant of the (analytically zero) net flux
  double flux = 0.0;
  for (int i = 0; i < n; ++i) flux += data[i] * panels[i].length;
  data.array() -= flux / solver.body().perimeter();

  NeumannSolution corr = solver.solve(data, "Phi_Gamma_correction");
  flow.source_strengths = corr.source_strengths;
  // tangential speed of the correction as the surface gradient of its
  // boundary potential: a centered difference between neighbor collocation
  // points is one order more accurate than point-sampling the velocity
  // kernel on the boundary
  flow.phi_correction = corr.phi_boundary;
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n, next = (i + 1) % n;
    const double ds = panels[i].length +
                      0.5 * (panels[prev].length + panels[next].length);
    const double dphi_ds =
        (corr.phi_boundary[next] - corr.phi_boundary[prev]) / ds;
    flow.vortex_tangential[i] =
        vortex_velocity(gamma, panels[i].mid).dot(panels[i].tangent);
    flow.tangential_speed[i] = flow.vortex_tangential[i] + dphi_ds;
  }
  return flow;
}

CirculatoryFlow circulatory_flow(const BodyBoundary& body, double gamma) {
  return circulatory_flow(PanelSolver(body), gamma);
}

double CirculatoryFlow::boundary_moment(const std::vector<double>& f_mid) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < midpoints.size(); ++i) {
    const int k = static_cast<int>(i);
    acc += f_mid[i] * tangential_speed[k] * lengths[k];
  }
  return acc;
}

double CirculatoryFlow::circulation() const {
  return boundary_moment(std::vector<double>(midpoints.size(), 1.0));
}

FlowModel::FlowModel(const BodyBoundary& body)
    : solver_(body), potentials_(kirchhoff_potentials(solver_)) {}

Vec2 FlowModel::velocity(const Se2Vector& zeta, double gamma, const Vec2& x) const {
  Eigen::VectorXd sigma = zeta.ang * potentials_.omega.source_strengths +
                          zeta.lin.x() * potentials_.x.source_strengths +
                          zeta.lin.y() * potentials_.y.source_strengths;
  Vec2 u = solver_.induced_velocity(sigma, x);
  if (gamma != 0.0) {
    if (!have_circ_ || cached_gamma_ != gamma) {
      circ_ = circulatory_flow(solver_, gamma);
      cached_gamma_ = gamma;
      have_circ_ = true;
    }
    u += vortex_velocity(gamma, x) + solver_.induced_velocity(circ_.source_strengths, x);
  }
  return u;
}

std::vector<Vec2> FlowModel::velocity_field(const Se2Vector& zeta, double gamma,
                                            const std::vector<Vec2>& points) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (solver_.body().contains(points[i])) {
      std::ostringstream os;
      os << "query point " << i << " (" << points[i].x() << ", " << points[i].y()
         << ") lies inside the body";
      throw ValidationError(os.str());
    }
  }
  std::vector<Vec2> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = velocity(zeta, gamma, points[i]);
  }
  return out;
}

std::vector<Vec2> velocity_field(const BodyBoundary& body, const Se2Vector& zeta,
                                 double gamma, const std::vector<Vec2>& points) {
  return FlowModel(body).velocity_field(zeta, gamma, points);
}

double curvature_gamma(const CirculatoryFlow& flow, const Se2Vector& zeta1,
                       const Se2Vector& zeta2) {
  // -oint W alpha_Gamma with alpha_Gamma = (u_vortex . t + dphi/ds) ds; the
  // dphi term is integrated by parts against the exact tangential gradient
  // of W, which keeps every quadrature integrand smooth on the closed loop
  const Vec2 grad_w = zeta1.ang * zeta2.lin - zeta2.ang * zeta1.lin;
  double acc = 0.0;
  for (std::size_t i = 0; i < flow.midpoints.size(); ++i) {
    const Vec2& x = flow.midpoints[i];
    const int k = static_cast<int>(i);
    // *(dPsi1 ^ dPsi2) on the boundary in terms of the rigid motions
    const double w =
        zeta1.lin.y() * zeta2.lin.x() - zeta1.lin.x() * zeta2.lin.y() +
        zeta1.ang * x.dot(zeta2.lin) - zeta2.ang * x.dot(zeta1.lin);
    acc += (w * flow.vortex_tangential[k] -
            flow.phi_correction[k] * grad_w.dot(flow.tangents[i])) *
           flow.lengths[k];
  }
  return -acc;
}

double curvature_gamma(const BodyBoundary& body, double gamma,
                       const Se2Vector& zeta1, const Se2Vector& zeta2) {
  return curvature_gamma(circulatory_flow(body, gamma), zeta1, zeta2);
}

}  // namespace circ

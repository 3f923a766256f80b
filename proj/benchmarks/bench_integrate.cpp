#include <benchmark/benchmark.h>

#include "circ/dynamics.hpp"

namespace {

circ::SimConfig base_config(circ::IntegratorKind kind) {
  Eigen::Matrix3d m;
  m << 2.0, 0.1, 0.0, 0.1, 1.5, 0.05, 0.0, 0.05, 1.0;
  circ::SimConfig cfg;
  cfg.mass = circ::MassModel::from_parts(m, circ::Mat3::Zero(), 1.0);
  cfg.gamma = 2.0;
  cfg.dt = 1e-3;
  cfg.steps = 10000;
  cfg.integrator = kind;
  cfg.pi0 = circ::Se2Momentum(0.4, 1.0, -0.3);
  return cfg;
}

void BM_IntegrateRk4(benchmark::State& state) {
  const circ::SimConfig cfg = base_config(circ::IntegratorKind::Rk4);
  for (auto _ : state) {
    const circ::Trajectory t = circ::integrate(cfg);
    benchmark::DoNotOptimize(t.samples.back().hamiltonian);
  }
}
BENCHMARK(BM_IntegrateRk4);

void BM_IntegrateMidpoint(benchmark::State& state) {
  const circ::SimConfig cfg = base_config(circ::IntegratorKind::ImplicitMidpoint);
  for (auto _ : state) {
    const circ::Trajectory t = circ::integrate(cfg);
    benchmark::DoNotOptimize(t.samples.back().hamiltonian);
  }
}
BENCHMARK(BM_IntegrateMidpoint);

}  // namespace

BENCHMARK_MAIN();

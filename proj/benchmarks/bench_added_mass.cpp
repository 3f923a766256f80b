#include <benchmark/benchmark.h>

#include "circ/potential.hpp"

namespace {

void BM_InfluenceAssembly(benchmark::State& state) {
  const circ::BodyBoundary body =
      circ::make_body(circ::CircleSpec{1.0}, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    circ::PanelSolver solver(body);
    benchmark::DoNotOptimize(solver.normal_influence().norm());
  }
}
BENCHMARK(BM_InfluenceAssembly)->Arg(64)->Arg(128)->Arg(256);

void BM_AddedMass(benchmark::State& state) {
  const circ::BodyBoundary body =
      circ::make_body(circ::EllipseSpec{2.0, 1.0}, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const circ::MassModel m = circ::added_mass(body, 1.0);
    benchmark::DoNotOptimize(m.Mf(1, 1));
  }
}
BENCHMARK(BM_AddedMass)->Arg(64)->Arg(128)->Arg(256);

void BM_CirculatoryFlow(benchmark::State& state) {
  const circ::BodyBoundary body = circ::make_body(
      circ::JoukowskiSpec{1.15, circ::Vec2(-0.1, 0.05), 1.0},
      static_cast<int>(state.range(0)));
  const circ::PanelSolver solver(body);
  for (auto _ : state) {
    const circ::CirculatoryFlow flow = circ::circulatory_flow(solver, 2.0);
    benchmark::DoNotOptimize(flow.circulation());
  }
}
BENCHMARK(BM_CirculatoryFlow)->Arg(128)->Arg(256);

}  // namespace

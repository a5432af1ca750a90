#include <benchmark/benchmark.h>

#include "tpfa/analysis.hpp"
#include "tpfa/assembly.hpp"
#include "tpfa/mesh.hpp"
#include "tpfa/singular.hpp"

namespace {

void BM_GenerateTriangularGrid(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    tpfa::AdmissibleMesh mesh = tpfa::generate_acute_triangular_grid(n);
    benchmark::DoNotOptimize(mesh.n_cells());
  }
  state.SetComplexityN(state.range(0));
}

void BM_AssembleAndSolve(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  tpfa::AdmissibleMesh mesh = tpfa::generate_square_grid(n);
  tpfa::SteadyData data = tpfa::sin_sin_load();
  tpfa::FunctionalData l = tpfa::steady_functional(mesh, data);
  for (auto _ : state) {
    tpfa::TpfaOperator op = tpfa::assemble_operator(mesh);
    tpfa::DiscreteField u = tpfa::solve(op, l);
    benchmark::DoNotOptimize(u.cell.sum());
  }
  state.counters["cells"] = mesh.n_cells();
}

void BM_UpperIncompleteGamma(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-3;
    if (x > 40.0) x = 0.0;
    benchmark::DoNotOptimize(tpfa::upper_incomplete_gamma(0.25, x));
  }
}

void BM_SingularConeMeans(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  tpfa::AdmissibleMesh mesh = tpfa::generate_acute_triangular_grid(n);
  tpfa::ExactSolutionOracle oracle = tpfa::singular_oracle();
  for (auto _ : state) {
    tpfa::ConeField g = oracle.mean_normal_gradient(mesh);
    benchmark::DoNotOptimize(g.l2_norm());
  }
  state.counters["cones"] = mesh.n_cones();
}

void BM_GradientOscillation(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  tpfa::AdmissibleMesh mesh = tpfa::generate_square_grid(n);
  tpfa::ExactSolutionOracle oracle = tpfa::make_sin_sin();
  for (auto _ : state)
    benchmark::DoNotOptimize(tpfa::gradient_oscillation(oracle, mesh));
  state.counters["cells"] = mesh.n_cells();
}

}  // namespace

BENCHMARK(BM_GenerateTriangularGrid)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_AssembleAndSolve)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_UpperIncompleteGamma);
BENCHMARK(BM_SingularConeMeans)->Arg(4)->Arg(8);
BENCHMARK(BM_GradientOscillation)->Arg(16)->Arg(32);

BENCHMARK_MAIN();

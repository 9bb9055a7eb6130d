#include <benchmark/benchmark.h>

#include "cutfrac/analysis.hpp"

using namespace cutfrac;

namespace {

struct Fixture {
  CaseSpec cs = case_manufactured();
  SolveOutput out;
  Fixture(int nx, Formulation f) {
    RunSettings s = settings_for(cs);
    s.nx = nx;
    s.formulation = f;
    out = solve_case(cs, s);
  }
  AssemblyContext ctx() const { return {out.mesh, *cs.interface, out.decomp, out.spaces}; }
};

void bm_assemble_standard(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)), Formulation::Standard);
  const AssemblyContext ctx = fx.ctx();
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_standard_coupling(ctx, fx.out.problem.coupling));
}

void bm_assemble_robust(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)), Formulation::Robust);
  const AssemblyContext ctx = fx.ctx();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        assemble_robust_coupling(ctx, fx.out.problem.coupling, fx.out.problem.penalty, fx.cs.coeffs));
}

void bm_assemble_full(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)), Formulation::Robust);
  const AssemblyContext ctx = fx.ctx();
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_unconstrained(ctx, fx.cs.coeffs, fx.out.problem));
}

void bm_solve_direct(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)), Formulation::Robust);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_direct(fx.out.system.A, fx.out.system.rhs));
}

void bm_solve_cg(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)), Formulation::Robust);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_cg(fx.out.system.A, fx.out.system.rhs, 1e-10, 10 * fx.out.system.size()));
}

} // namespace

BENCHMARK(bm_assemble_standard)->Arg(23)->Arg(47);
BENCHMARK(bm_assemble_robust)->Arg(23)->Arg(47);
BENCHMARK(bm_assemble_full)->Arg(23)->Arg(47);
BENCHMARK(bm_solve_direct)->Arg(23)->Arg(47);
BENCHMARK(bm_solve_cg)->Arg(23)->Arg(47);

BENCHMARK_MAIN();

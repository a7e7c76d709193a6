// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "helmres/lippmann.hpp"
#include "helmres/reference.hpp"

namespace
{

using namespace helmres;

MediumProfile cavity()
{
  return air_filled_cavity_profile(1.5, std::sqrt(3.5), std::sqrt(2.5));
}

MeshedSpace dtn_space(const MediumProfile &m, double d, int p, double h)
{
  std::vector<double> bps;
  for (double b : m.breakpoints())
  {
    if (b > -d && b < d)
    {
      bps.push_back(b);
    }
  }
  return build_space(build_mesh({-d, d}, bps, h, 0), p, BoundaryCondition::None);
}

void BM_AssembleDtn(benchmark::State &state)
{
  const MediumProfile m = bump_profile();
  const MeshedSpace s = dtn_space(m, 1.5, static_cast<int>(state.range(0)), 0.125);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(assemble_dtn(s, m));
  }
  state.counters["dofs"] = static_cast<double>(s.dof_count());
}
BENCHMARK(BM_AssembleDtn)->Arg(4)->Arg(10)->Arg(20);

void BM_SolveDtn(benchmark::State &state)
{
  const MediumProfile m = cavity();
  const DtnMatrices mats = assemble_dtn(dtn_space(m, 2.0, static_cast<int>(state.range(0)), 0.5), m);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve_dtn(mats));
  }
  state.counters["pencil"] = static_cast<double>(2 * mats.A.rows());
}
BENCHMARK(BM_SolveDtn)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SolvePml(benchmark::State &state)
{
  const MediumProfile m = cavity();
  const PmlConfig cfg(1.5, 2.0, 3.0, 5.0, 5.0);
  std::vector<double> bps{-3.0, -2.0, -1.5, -1.0, 1.0, 1.5, 2.0, 3.0};
  const MeshedSpace s = build_space(build_mesh({-5.0, 5.0}, bps, 0.5, 0),
                                    static_cast<int>(state.range(0)),
                                    BoundaryCondition::DirichletBothEnds);
  const PmlMatrices mats = assemble_pml(s, m, StretchFunction(cfg));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve_pml(mats));
  }
}
BENCHMARK(BM_SolvePml)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CollocationMatrix(benchmark::State &state)
{
  const LsContext ctx = make_ls_context(cavity(), static_cast<int>(state.range(0)), 0.25, 0);
  const Complex k(3.3, -0.5);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ctx.collocation_matrix(k));
  }
  state.counters["dofs"] = static_cast<double>(ctx.space().dof_count());
}
BENCHMARK(BM_CollocationMatrix)->Arg(4)->Arg(6)->Arg(10);

void BM_PseudospectrumPoint(benchmark::State &state)
{
  const LsContext ctx = make_ls_context(cavity(), 6, 0.25, 0);
  const Complex k(3.3, -0.5);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(smallest_singular_value(ctx.collocation_matrix(k)));
  }
}
BENCHMARK(BM_PseudospectrumPoint);

void BM_FilterEpsilon(benchmark::State &state)
{
  const MediumProfile m = cavity();
  const MeshedSpace s = dtn_space(m, 2.0, 6, 0.25);
  const EigenSolution sol = solve_dtn(assemble_dtn(s, m));
  const LsContext ctx = make_ls_context(m, 6, 0.25, 0);
  const EigenPair &pair = sol.pairs.front();
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(filter_epsilon(ctx, pair, s));
  }
}
BENCHMARK(BM_FilterEpsilon);

void BM_CavityNewton(benchmark::State &state)
{
  const ReferenceSet table = paper_table(PaperTable::AirCavity);
  std::vector<Complex> seeds;
  for (const auto &e : table.entries)
  {
    seeds.push_back(e.k + Complex(0.01, -0.01));
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(cavity_eigenvalues(1.5, std::sqrt(3.5), std::sqrt(2.5), seeds));
  }
}
BENCHMARK(BM_CavityNewton);

}  // namespace

BENCHMARK_MAIN();

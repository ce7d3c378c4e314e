#include <benchmark/benchmark.h>

#include <random>

#include "spls/multilevel.hpp"
#include "spls/problems.hpp"
#include "spls/spls.hpp"

using namespace spls;

namespace {

Vector random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

void BM_AssembleOptimalNorm(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Mesh2D mesh = build_hierarchy(level, MeshFamily::Uniform).finest();
  const FemSpace space = FemSpace::interior(mesh);
  const auto coeffs = ProblemCoefficients::reaction_example(1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_norm_operator(coeffs, space));
  state.SetItemsProcessed(state.iterations() * mesh.num_triangles());
}
BENCHMARK(BM_AssembleOptimalNorm)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

void BM_SplsSystemSetup(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Mesh2D mesh = build_hierarchy(level, MeshFamily::Uniform).finest();
  const auto coeffs = ProblemCoefficients::reaction_example(1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(SplsSystem(mesh, coeffs));
}
BENCHMARK(BM_SplsSystemSetup)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_ApplySbvp(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const MultilevelContext ctx(build_hierarchy(level, MeshFamily::Uniform), ProblemCoefficients::reaction_example(1e-3));
  const Vector f = random_vector(ctx.size(level), 1);
  const auto variant = state.range(1) == 0 ? SbvpVariant::MassFinest : SbvpVariant::DiagFinest;
  for (auto _ : state) benchmark::DoNotOptimize(apply_sbvp(ctx, f, variant));
  state.SetLabel(variant == SbvpVariant::MassFinest ? "mass finest" : "diag finest");
}
BENCHMARK(BM_ApplySbvp)->ArgsProduct({{4, 5, 6, 7}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_ApplyMgGs(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const MultilevelContext ctx(build_hierarchy(level, MeshFamily::Uniform), ProblemCoefficients::reaction_example(1e-3));
  const MultigridHierarchy mg(ctx);
  const Vector f = random_vector(ctx.size(level), 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_mg_gs(mg, f));
}
BENCHMARK(BM_ApplyMgGs)->DenseRange(4, 7)->Unit(benchmark::kMicrosecond);

void BM_UpcgSolve(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const double eps = 1e-3;
  const ManufacturedProblem prob(eps);
  const MultilevelContext ctx(build_hierarchy(level, MeshFamily::Uniform), prob.coeffs);
  const SplsSystem sys(ctx.hierarchy().finest(), prob.coeffs);
  const auto p = make_preconditioner(PreconditionerKind::sBVP, ctx);
  const Vector rhs = sys.load(prob.f());
  int iterations = 0;
  for (auto _ : state) {
    const SplsSolution sol = upcg_solve(sys, rhs, TrialSpace::Orth, *p);
    iterations = sol.report.iterations;
    benchmark::DoNotOptimize(sol.p.scalar.data());
  }
  state.counters["uzawa_iterations"] = iterations;
}
BENCHMARK(BM_UpcgSolve)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

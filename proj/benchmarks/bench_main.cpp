#include <benchmark/benchmark.h>

#include <vector>

#include "spectracalc/asg.hpp"
#include "spectracalc/calculus.hpp"
#include "spectracalc/enumeration.hpp"
#include "spectracalc/hybrid.hpp"
#include "spectracalc/jordan.hpp"

using namespace spectracalc;

namespace {

// n x n float operator with blocks of size 1..3 cycling over distinct eigenvalues
JordanSpec<Complex> float_spec(std::size_t n) {
  JordanSpec<Complex> s;
  std::size_t used = 0, k = 0;
  while (used < n) {
    const std::size_t m = std::min<std::size_t>(1 + k % 3, n - used);
    s.groups.push_back({Complex(0.9 * std::cos(0.7 * k), 0.9 * std::sin(0.7 * k)), {m}});
    used += m;
    ++k;
  }
  s.transform = seeded_transform(n, 17);
  return canonicalize(s);
}

void BM_AssembleFloat(benchmark::State& st) {
  const auto spec = float_spec(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(assemble(spec));
}
BENCHMARK(BM_AssembleFloat)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_DecomposeFloat(benchmark::State& st) {
  const MatrixF x = assemble(float_spec(static_cast<std::size_t>(st.range(0))));
  Tolerance tol;
  tol.cluster_eps = 1e-3;  // size-3 blocks scatter computed eigenvalues by about eps^(1/3)
  for (auto _ : st) benchmark::DoNotOptimize(decompose(x, tol));
}
BENCHMARK(BM_DecomposeFloat)->Arg(4)->Arg(8)->Arg(16);

void BM_ExtractFamily(benchmark::State& st) {
  const auto spec = float_spec(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(extract_family(spec));
}
BENCHMARK(BM_ExtractFamily)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_ApplySingleExp(benchmark::State& st) {
  const auto fam = extract_family(float_spec(static_cast<std::size_t>(st.range(0))));
  const auto f = SeriesFunction::exp();
  for (auto _ : st) benchmark::DoNotOptimize(apply_single(f, fam));
}
BENCHMARK(BM_ApplySingleExp)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_SeriesOracleExp(benchmark::State& st) {
  const std::vector<MatrixF> xs{assemble(float_spec(static_cast<std::size_t>(st.range(0))))};
  const auto f = SeriesFunction::exp();
  for (auto _ : st) benchmark::DoNotOptimize(series_oracle<Complex>(f, xs, 30));
}
BENCHMARK(BM_SeriesOracleExp)->Arg(4)->Arg(8)->Arg(16);

void BM_ApplyTwoExpSum(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = extract_family(float_spec(n));
  auto sb = float_spec(n);
  sb.transform = seeded_transform(n, 23);
  const auto b = extract_family(sb);
  const auto f = SeriesFunction::exp_sum(2);
  for (auto _ : st) benchmark::DoNotOptimize(apply_two(f, a, b));
}
BENCHMARK(BM_ApplyTwoExpSum)->Arg(4)->Arg(8)->Arg(12);

void BM_FamilyCount(benchmark::State& st) {
  const auto m = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(family_count(m));
}
BENCHMARK(BM_FamilyCount)->Arg(10)->Arg(50)->Arg(200);

void BM_BuildGraph(benchmark::State& st) {
  const auto fam = extract_family(float_spec(static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(export_dot(build_graph(fam)));
}
BENCHMARK(BM_BuildGraph)->Arg(8)->Arg(32);

void BM_ApplyHybrid(benchmark::State& st) {
  HybridOperatorSpec s;
  s.discrete = {{Complex(0.0, 2.0), 2, 1}};
  s.continuous = HybridOperatorSpec::midpoint_nodes(-1.0, 1.0, static_cast<std::size_t>(st.range(0)), 1);
  s.transform = seeded_transform(s.dimension(), 3);
  const auto f = SeriesFunction::exp();
  for (auto _ : st) benchmark::DoNotOptimize(apply_hybrid(f, s));
}
BENCHMARK(BM_ApplyHybrid)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
BENCHMARK_MAIN();

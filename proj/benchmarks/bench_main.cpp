#include <benchmark/benchmark.h>

#include "gbdef/complex.hpp"
#include "gbdef/deformation.hpp"

using namespace gbdef;

namespace {

GradedBialgebra taft3() {
  Field f7 = Field::prime(7);
  return taft(f7, 3, f7.from_int(2));
}

GradedBialgebra h4() {
  Field q = Field::rational();
  return taft(q, 2, q.from_int(-1));
}

}  // namespace

// Fresh complex per iteration: includes assembling d^1 and d^2 and the echelon of the image.
static void BM_CohomologyH2(benchmark::State& state) {
  GradedBialgebra b = taft3();
  int l = int(-state.range(0));
  for (auto _ : state) {
    HatComplex cx(b);
    benchmark::DoNotOptimize(cx.cohomology(2, l).dimension);
  }
}
BENCHMARK(BM_CohomologyH2)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// The largest spaces the deformation operations touch: n = 3 on taft(3, 2).
static void BM_CohomologyH3(benchmark::State& state) {
  GradedBialgebra b = taft3();
  for (auto _ : state) {
    HatComplex cx(b);
    benchmark::DoNotOptimize(cx.cohomology(3, -3).dimension);
  }
}
BENCHMARK(BM_CohomologyH3)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_DifferentialMatrix(benchmark::State& state) {
  GradedBialgebra b = taft3();
  int n = int(state.range(0));
  for (auto _ : state) {
    HatComplex cx(b);
    benchmark::DoNotOptimize(cx.differential_matrix(n, -2).cols);
  }
}
BENCHMARK(BM_DifferentialMatrix)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// Memoized elementary columns: repeated differentials on a warm complex.
static void BM_TotalDifferentialWarm(benchmark::State& state) {
  HatComplex cx(taft3());
  TotalCochain t = cx.from_vector(2, -2, SparseVec::unit(0, cx.field().one()));
  cx.differential_matrix(2, -2);
  for (auto _ : state) benchmark::DoNotOptimize(cx.total_differential(t).parts.size());
}
BENCHMARK(BM_TotalDifferentialWarm);

static void BM_VerifyDeformation(benchmark::State& state) {
  HatComplex cx(h4());
  Deformation d = Deformation::trivial(cx.bialgebra(), full_level(cx.bialgebra()));
  for (auto _ : state) benchmark::DoNotOptimize(verify_deformation(d).passed());
}
BENCHMARK(BM_VerifyDeformation);

static void BM_TruncatedRingOracle(benchmark::State& state) {
  HatComplex cx(h4());
  Deformation d = Deformation::trivial(cx.bialgebra(), full_level(cx.bialgebra()));
  for (auto _ : state) benchmark::DoNotOptimize(truncated_ring_oracle(d).passed());
}
BENCHMARK(BM_TruncatedRingOracle);

static void BM_ExtendRestricted(benchmark::State& state) {
  GradedBialgebra b = restricted_poly(3);
  for (auto _ : state) {
    HatComplex cx(b);
    Deformation d = Deformation::trivial(b, 1);
    while (d.level() < full_level(b)) d = *extend(cx, d).extended;
    benchmark::DoNotOptimize(d.level());
  }
}
BENCHMARK(BM_ExtendRestricted)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "csd/constructions.hpp"
#include "csd/convexity.hpp"

namespace {

using namespace csd;

FixedData rank2(long b, long c, long d2) { return FixedData::from_exchange({{0, b}, {-c, 0}}, {1, d2}, {0, 1}); }

Diagram completed(const FixedData& fd, long K) { return complete_rank2(initial_diagram(fd, Seed::standard(2), K), K); }

const FixedData kA2 = rank2(1, 1, 1);
const FixedData kG2 = rank2(3, 1, 3);
const FixedData kKronecker = rank2(2, 2, 1);

void BM_CompleteA2(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(completed(kA2, state.range(0)));
}
BENCHMARK(BM_CompleteA2)->Arg(5)->Arg(10);

void BM_CompleteG2(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(completed(kG2, state.range(0)));
}
BENCHMARK(BM_CompleteG2)->Arg(6)->Arg(10);

void BM_CompleteKronecker(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(completed(kKronecker, state.range(0)));
}
BENCHMARK(BM_CompleteKronecker)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ThetaG2(benchmark::State& state) {
  Diagram d = completed(kG2, 10);
  const long K = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(theta(d, LatticePoint{2, -1}, RatPoint{rat(-1, 3), rat(7, 2)}, K));
}
BENCHMARK(BM_ThetaG2)->Arg(4)->Arg(8);

void BM_MultiplyG2(benchmark::State& state) {
  Diagram d = completed(kG2, 8);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(d, LatticePoint{1, 0}, LatticePoint{-1, 0}, 8));
}
BENCHMARK(BM_MultiplyG2)->Unit(benchmark::kMillisecond);

void BM_GlueAndSplitA2(benchmark::State& state) {
  Diagram d = completed(kA2, 5);
  Segment s;
  s.start = RatPoint{1, -5};
  s.end = RatPoint{2, 4};
  s.total_time = 5;
  s.pieces = {{LatticePoint{1, -3}, 1, 1}, {LatticePoint{1, -2}, 1, 1}, {LatticePoint{-1, -2}, 1, 1}, {LatticePoint{-1, -1}, 1, 2}};
  for (auto _ : state) {
    ReverseResult r = pair_from_segment(d, s, rat(5, 2), 1, 1);
    benchmark::DoNotOptimize(glue_balanced(d, r.pair, 1, 1));
  }
}
BENCHMARK(BM_GlueAndSplitA2);

void BM_HullG2(benchmark::State& state) {
  Diagram d = completed(kG2, 10);
  std::vector<RatPoint> pts{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, -2}, {1, -3}, {2, -3}};
  for (auto _ : state) benchmark::DoNotOptimize(blc_hull_2d(d, pts));
}
BENCHMARK(BM_HullG2)->Unit(benchmark::kMillisecond);

void BM_CheckPositiveA2(benchmark::State& state) {
  Diagram d = completed(kA2, 6);
  RationalPointSet pent{SetKind::Polygon, {{0, -1}, {1, -1}, {1, 0}, {0, 1}, {-1, 0}}};
  for (auto _ : state) benchmark::DoNotOptimize(check_positive(d, pent, state.range(0), 6));
}
BENCHMARK(BM_CheckPositiveA2)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>

#include "radcap/bounds.hpp"

using namespace radcap;

namespace {

void BM_LogScalarSum(benchmark::State& s) {
    LogScalar a = LogScalar::from_log(-300.0), b = LogScalar::from_log(-301.5);
    for (auto _ : s) {
        a = a + b;
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_LogScalarSum);

void BM_BuildLadderProfile(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(MeasureProfile::from_weight(make_ex1()));
}
BENCHMARK(BM_BuildLadderProfile)->Unit(benchmark::kMicrosecond);

void BM_BallMeasureLadder(benchmark::State& s) {
    const MeasureProfile P = MeasureProfile::from_weight(make_ex1());
    double t = -1.0;
    for (auto _ : s) {
        benchmark::DoNotOptimize(P.ball_measure_log(t));
        t = t < -1e8 ? -1.0 : t * 1.7;
    }
}
BENCHMARK(BM_BallMeasureLadder);

// Annulus capacity across many pieces: the argument is log(R/r).
void BM_AnnulusCapacity(benchmark::State& s) {
    const MeasureProfile P = MeasureProfile::from_weight(make_ex1());
    const double span = static_cast<double>(s.range(0));
    for (auto _ : s) benchmark::DoNotOptimize(annulus_capacity_log(P, 2.5, -span - 1.0, -1.0));
}
BENCHMARK(BM_AnnulusCapacity)->RangeMultiplier(100)->Range(1, 1000000);

void BM_CapacityForcedQuadrature(benchmark::State& s) {
    const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_zero(2, 2, 0.5));
    for (auto _ : s) benchmark::DoNotOptimize(annulus_capacity_log(P, 2.0, -30.0, -2.0, true));
}
BENCHMARK(BM_CapacityForcedQuadrature)->Unit(benchmark::kMicrosecond);

void BM_ExponentReport(benchmark::State& s) {
    const MeasureProfile P = MeasureProfile::from_weight(make_abcd(2, 1.5, 2, 2.5, 3));
    for (auto _ : s) benchmark::DoNotOptimize(exponent_report(P));
}
BENCHMARK(BM_ExponentReport)->Unit(benchmark::kMillisecond);

void BM_CheckBound(benchmark::State& s) {
    const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_zero(2, 2, 0.5));
    const ExponentReport rep = exponent_report(P);
    const GridSpec g = default_grid(P, Regime::small);
    for (auto _ : s) benchmark::DoNotOptimize(check_bound(find_bound("UB-LOG-uQ"), P, 2.0, std::nullopt, g, rep));
}
BENCHMARK(BM_CheckBound)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

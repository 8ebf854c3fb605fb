#include <benchmark/benchmark.h>

#include "galorb/gauss_sum.hpp"
#include "galorb/local_types.hpp"

using namespace galorb;

namespace {

void orbit_args(benchmark::internal::Benchmark* b) {
    for (int p : {5, 7, 11})
        for (int a : {2, 3, 4}) b->Args({p, a});
}

SupercuspidalFamily family(const benchmark::State& st) {
    const i64 p = st.range(0);
    return supercuspidal_family(QuadExt::unramified(p), static_cast<int>(st.range(1)), LocalNebentypus::tame());
}

void BM_OrbitsParallel(benchmark::State& st) {
    auto fam = family(st);
    for (auto _ : st) benchmark::DoNotOptimize(count_orbits_parallel(fam.fiber, fam.keep, fam.action));
    st.counters["characters"] = static_cast<double>(fam.fiber.size());
}
BENCHMARK(BM_OrbitsParallel)->Apply(orbit_args)->Unit(benchmark::kMillisecond);

void BM_OrbitsSerial(benchmark::State& st) {
    auto fam = family(st);
    for (auto _ : st) benchmark::DoNotOptimize(count_orbits_serial(fam.fiber, fam.keep, fam.action));
    st.counters["characters"] = static_cast<double>(fam.fiber.size());
}
BENCHMARK(BM_OrbitsSerial)->Apply(orbit_args)->Unit(benchmark::kMillisecond);

CharacterVec primitive_character(i64 p, int a) {
    auto G = unit_group(p, a, QuadExt::ramified_a(p));
    auto fib = central_fiber(G, LocalNebentypus::tame());
    for (i64 i = 0; i < fib.size(); ++i)
        if (conductor(fib.at(i)) == a) return fib.at(i);
    return CharacterVec::trivial(G);
}

void gauss_args(benchmark::internal::Benchmark* b) {
    for (int p : {5, 7, 13})
        for (int a : {2, 4}) b->Args({p, a});
}

void BM_GaussParallel(benchmark::State& st) {
    auto theta = primitive_character(st.range(0), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::gauss_histogram_parallel(theta, AdditiveSign::Positive));
}
BENCHMARK(BM_GaussParallel)->Apply(gauss_args)->Unit(benchmark::kMillisecond);

void BM_GaussSerial(benchmark::State& st) {
    auto theta = primitive_character(st.range(0), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::gauss_histogram_serial(theta, AdditiveSign::Positive));
}
BENCHMARK(BM_GaussSerial)->Apply(gauss_args)->Unit(benchmark::kMillisecond);

void BM_GaussSumFull(benchmark::State& st) {
    auto theta = primitive_character(st.range(0), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(gauss_sum(theta));
}
BENCHMARK(BM_GaussSumFull)->Apply(gauss_args)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

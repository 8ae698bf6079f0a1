#include <benchmark/benchmark.h>

#include "coarse/adversary.hpp"
#include "coarse/codings.hpp"
#include "coarse/decoders.hpp"
#include "coarse/density.hpp"
#include "coarse/trust.hpp"

using namespace coarse;

namespace {

void bench_density_profile(benchmark::State& state) {
    const BitPrefix a =
        evaluate_prefix(Generator::seeded_random(7), static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(density_profile(a));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_density_profile)->Arg(1 << 12)->Arg(1 << 16);

void bench_r_code(benchmark::State& state) {
    const BitPrefix a = evaluate_prefix(Generator::seeded_random(11), 24);
    for (auto _ : state) {
        benchmark::DoNotOptimize(r_code(a, static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(bench_r_code)->Arg(1 << 14)->Arg(1 << 18);

void bench_interval_decode(benchmark::State& state) {
    const BitPrefix code = interval_code(Generator::seeded_random(13), 40320);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode_prefix(code, 7));
    }
}
BENCHMARK(bench_interval_decode);

void bench_miller_merge(benchmark::State& state) {
    const auto k_max = static_cast<unsigned>(state.range(0));
    const BitPrefix truth =
        evaluate_prefix(Generator::seeded_random(17), dyadic_block_hi(k_max));
    WitnessFamily family;
    for (int n = 0; n < 6; ++n) family.members.push_back(Generator::table_backed(truth));
    for (auto _ : state) {
        benchmark::DoNotOptimize(miller_merge(family, k_max));
    }
}
BENCHMARK(bench_miller_merge)->Arg(12)->Arg(16);

void bench_weak_generic_defeat(benchmark::State& state) {
    GeneratorLibrary lib;
    for (int e = 0; e < 4; ++e) lib.add(Generator::seeded_random(100 + e));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            weak_generic_defeat(lib, {4, 8}, static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(bench_weak_generic_defeat)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();

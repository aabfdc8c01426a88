// Serial reference vs OpenMP kernels on a synthetic platform.
//
//   cspm_bench --benchmark_filter=Profiles
//   OMP_NUM_THREADS=8 cspm_bench

#include "cspm/platform_metrics.hpp"
#include "cspm/rng.hpp"
#include "cspm/synth.hpp"
#include "cspm/volunteer_metrics.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>

namespace {

using namespace cspm;

const PlatformSnapshot& snapshot(std::size_t volunteers) {
    static std::map<std::size_t, PlatformSnapshot> cache;
    auto it = cache.find(volunteers);
    if (it == cache.end()) {
        synth::SynthConfig c;
        c.volunteer_count = volunteers;
        c.project_count = 22;
        c.target_events = volunteers * 48;
        it = cache.emplace(volunteers, build_snapshot(synth::generate(c).events)).first;
    }
    return it->second;
}

const Profiles& profiles(std::size_t volunteers) {
    static std::map<std::size_t, Profiles> cache;
    auto it = cache.find(volunteers);
    if (it == cache.end()) it = cache.emplace(volunteers, derive_profiles(snapshot(volunteers))).first;
    return it->second;
}

std::vector<double> sample(std::size_t n) {
    std::mt19937_64 rng(n);
    std::vector<double> s(n);
    for (auto& v : s) v = uniform_unit(rng);
    return s;
}

void BM_ProfilesSerial(benchmark::State& state) {
    const auto& snap = snapshot(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::derive_profiles(snap));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(snap.event_count()));
}

void BM_ProfilesParallel(benchmark::State& state) {
    const auto& snap = snapshot(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(derive_profiles(snap));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(snap.event_count()));
}

void BM_VolunteerMetricsSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto& p = profiles(n);
    const auto end = snapshot(n).observation_end();
    for (auto _ : state) benchmark::DoNotOptimize(serial::compute_volunteer_metrics(p, end));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_VolunteerMetricsParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto& p = profiles(n);
    const auto end = snapshot(n).observation_end();
    for (auto _ : state) benchmark::DoNotOptimize(compute_volunteer_metrics(p, end));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BootstrapSerial(benchmark::State& state) {
    const auto s = sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::bootstrap_mean_ci(s, 0.95, 10000, 1));
}

void BM_BootstrapParallel(benchmark::State& state) {
    const auto s = sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bootstrap_mean_ci(s, 0.95, 10000, 1));
}

}  // namespace

BENCHMARK(BM_ProfilesSerial)->Arg(2000)->Arg(26133)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfilesParallel)->Arg(2000)->Arg(26133)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VolunteerMetricsSerial)->Arg(2000)->Arg(26133)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VolunteerMetricsParallel)->Arg(2000)->Arg(26133)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BootstrapSerial)->Arg(100)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Arg(100)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

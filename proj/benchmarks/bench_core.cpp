#include <benchmark/benchmark.h>

#include <cstdint>

#include "ensp/canonical.hpp"
#include "ensp/constraint.hpp"
#include "ensp/enumeration.hpp"
#include "ensp/graph.hpp"
#include "ensp/microcanonical.hpp"
#include "ensp/rng.hpp"
#include "ensp/spectral.hpp"

namespace {

using namespace ensp;

void bench_canonical_sample(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    CanonicalModel model = calibrate(ConstraintSpec::rounded_edge_count(n, 0.5));
    Rng rng = make_rng(7);
    for (auto _ : state) {
        Graph g = sample_canonical(model, rng);
        benchmark::DoNotOptimize(g.edge_count());
    }
    state.SetComplexityN(n);
}
BENCHMARK(bench_canonical_sample)->Arg(100)->Arg(400)->Arg(1000)->Complexity();

void bench_lambda1(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    CanonicalModel model = calibrate(ConstraintSpec::rounded_edge_count(n, 0.5));
    Graph g = sample_canonical(model, 11);
    for (auto _ : state) {
        EigenResult top = lambda1_full(g);
        benchmark::DoNotOptimize(top.value);
    }
    state.SetComplexityN(n);
}
BENCHMARK(bench_lambda1)->Arg(100)->Arg(400)->Arg(1000)->Complexity();

void bench_edge_subset(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::int64_t L = pair_count(n) / 2;
    Rng rng = make_rng(13);
    for (auto _ : state) {
        Graph g = sample_mic_edge_count(n, L, rng);
        benchmark::DoNotOptimize(g.edge_count());
    }
}
BENCHMARK(bench_edge_subset)->Arg(100)->Arg(400)->Arg(1000);

void bench_degree_chain(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ConstraintSpec spec = ConstraintSpec::rounded_regular(n, 0.5);
    MicSamplerConfig cfg;
    cfg.method = MicMethod::EdgeSwapMcmc;
    DegreeSampler sampler(spec, cfg, 17);
    for (auto _ : state) {
        Graph g = sampler.next();
        benchmark::DoNotOptimize(g.edge_count());
    }
}
BENCHMARK(bench_degree_chain)->Arg(50)->Arg(100)->Arg(200);

void bench_enumeration(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ConstraintSpec spec = ConstraintSpec::regular(n, 2);
    for (auto _ : state) {
        std::int64_t size = exact_gamma_size(spec);
        benchmark::DoNotOptimize(size);
    }
}
BENCHMARK(bench_enumeration)->Arg(5)->Arg(6)->Arg(7);

}  // namespace

BENCHMARK_MAIN();

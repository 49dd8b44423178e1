// Serial reference kernels vs their OpenMP counterparts on the default rule.
// Thread count follows OMP_NUM_THREADS.

#include <array>

#include <benchmark/benchmark.h>

#include "rieszflow/approx.hpp"
#include "rieszflow/kernels.hpp"
#include "rieszflow/operators.hpp"

namespace {

using namespace rieszflow;

const MapSpec& bench_map() {
    static const MapSpec map = [] {
        const std::array<std::size_t, 1> hidden{8};
        return make_flow_map(hidden, 0.5, 7, 1.0, true, 1.2, 0.3);
    }();
    return map;
}

Matrix bench_columns(std::size_t n) {
    return sample_perturbed({BasisSpec::hermite(n), bench_map(), Flavor::Composition}, n, default_rule());
}

void BM_WeightedDotSerial(benchmark::State& state) {
    const Matrix c = bench_columns(2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_dot_serial(default_rule().weights(), c.row(0), c.row(1)));
}
BENCHMARK(BM_WeightedDotSerial);

void BM_WeightedDotParallel(benchmark::State& state) {
    const Matrix c = bench_columns(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::weighted_dot(default_rule().weights(), c.row(0), c.row(1), default_rule().order()));
}
BENCHMARK(BM_WeightedDotParallel);

void BM_GramSerial(benchmark::State& state) {
    const Matrix c = bench_columns(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_serial(c, default_rule().weights()));
}
BENCHMARK(BM_GramSerial)->Arg(8)->Arg(16)->Arg(32);

void BM_GramParallel(benchmark::State& state) {
    const Matrix c = bench_columns(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(c, default_rule().weights(), default_rule().order()));
}
BENCHMARK(BM_GramParallel)->Arg(8)->Arg(16)->Arg(32);

void BM_SampleSerial(benchmark::State& state) {
    const PerturbedBasis pb{BasisSpec::hermite(16), bench_map(), Flavor::Composition};
    for (auto _ : state) benchmark::DoNotOptimize(sample_perturbed_serial(pb, 16, default_rule()));
}
BENCHMARK(BM_SampleSerial);

void BM_SampleParallel(benchmark::State& state) {
    const PerturbedBasis pb{BasisSpec::hermite(16), bench_map(), Flavor::Composition};
    for (auto _ : state) benchmark::DoNotOptimize(sample_perturbed(pb, 16, default_rule()));
}
BENCHMARK(BM_SampleParallel);

void BM_ObjectiveGradient(benchmark::State& state) {
    const ExpansionObjective obj(TargetFn::sin_abs_gaussian(), 10, default_rule());
    const MapSpec map = default_flow_template(0);
    for (auto _ : state) benchmark::DoNotOptimize(obj.error_and_gradient(map));
}
BENCHMARK(BM_ObjectiveGradient);

}  // namespace

BENCHMARK_MAIN();

#include <netinfer/experiment.hpp>
#include <netinfer/feature_select.hpp>
#include <netinfer/kernels.hpp>
#include <netinfer/lasso.hpp>
#include <netinfer/nsvm.hpp>
#include <netinfer/rbn.hpp>
#include <netinfer/simulate.hpp>
#include <netinfer/svr.hpp>

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include <random>

using namespace netinfer;

namespace {

// One response of the reference-scale design: 19 transitions, p predictors.
struct Response {
    Matrix X;
    Vector y;
};

Response response(std::size_t p) {
    SimConfig sc;
    sc.p = p;
    sc.n = 20;
    sc.seed = 42;
    const LaggedPairs lp = build_lagged_pairs(simulate(sc).series);
    return {lp.X, lp.Y.col(0)};
}

KernelSpec kernel_for(int family, std::size_t p) {
    return KernelSpec::defaults(static_cast<KernelFamily>(family), p);
}

SimOutput simulated(std::size_t p) {
    SimConfig sc;
    sc.p = p;
    sc.n = 20;
    sc.seed = 7;
    return simulate(sc);
}

} // namespace

static void BM_SvrFit(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const Response r = response(p);
    const KernelSpec k = kernel_for(static_cast<int>(state.range(1)), p);
    for (auto _ : state) benchmark::DoNotOptimize(fit_svr(r.X, r.y, k, {}));
    state.SetLabel(std::string(to_string(k.family)));
}
BENCHMARK(BM_SvrFit)->ArgsProduct({{10, 50, 100}, {0, 1, 2, 3}})->Unit(benchmark::kMicrosecond);

static void BM_LoocvMse(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const Response r = response(p);
    const Matrix K = gram_matrix(KernelSpec::rbf(1.0 / static_cast<double>(p)), r.X);
    for (auto _ : state) benchmark::DoNotOptimize(loocv_mse(K, r.y, {}));
}
BENCHMARK(BM_LoocvMse)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

static void BM_PrefixLoocv(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const Response r = response(p);
    const KernelSpec k = KernelSpec::rbf(1.0 / static_cast<double>(p));
    const Ranking rank = rank_features(r.X, r.y, k, {});
    for (auto _ : state) benchmark::DoNotOptimize(prefix_loocv_errors(r.X, r.y, rank, k, {}));
}
BENCHMARK(BM_PrefixLoocv)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Tuning(benchmark::State& state) {
    const Response r = response(50);
    const KernelSpec k = kernel_for(static_cast<int>(state.range(0)), 50);
    for (auto _ : state)
        benchmark::DoNotOptimize(tune_hyperparameters(r.X, r.y, k, 1.0, TuningGrid::defaults(), {}));
    state.SetLabel(std::string(to_string(k.family)));
}
BENCHMARK(BM_Tuning)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_InferNsvm(benchmark::State& state) {
    const SimOutput sim = simulated(static_cast<std::size_t>(state.range(0)));
    NsvmOptions o;
    o.family = static_cast<KernelFamily>(state.range(1));
    o.tune = state.range(2) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(infer_nsvm(sim.series, o));
    state.SetLabel(std::string(to_string(o.family)) + (o.tune ? " tuned" : " default"));
}
BENCHMARK(BM_InferNsvm)->ArgsProduct({{10, 50}, {0, 2}, {0, 1}})->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_LearnRbn(benchmark::State& state) {
    const SimOutput sim = simulated(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(learn_rbn(sim.series));
}
BENCHMARK(BM_LearnRbn)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_InferNlasso(benchmark::State& state) {
    const SimOutput sim = simulated(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(infer_nlasso(sim.series));
}
BENCHMARK(BM_InferNlasso)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
    SimConfig sc;
    sc.p = static_cast<std::size_t>(state.range(0));
    sc.n = 20;
    sc.mode = static_cast<SimMode>(state.range(1));
    for (auto _ : state) {
        ++sc.seed;
        benchmark::DoNotOptimize(simulate(sc));
    }
}
BENCHMARK(BM_Simulate)->ArgsProduct({{50, 100}, {0, 1, 2}})->Unit(benchmark::kMicrosecond);

int main(int argc, char** argv) {
    spdlog::set_level(spdlog::level::err);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}

#include "cirkm/eval.hpp"
#include "cirkm/model.hpp"
#include "cirkm/solver.hpp"
#include "cirkm/weights.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace cirkm;

std::pair<Eigen::MatrixXd, Eigen::VectorXi> make_data(Eigen::Index n, Eigen::Index d) {
    std::mt19937_64 eng(12345);
    auto u = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    Eigen::MatrixXd X(n, d);
    Eigen::VectorXi y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i) = i % 2 == 0 ? 1 : -1;
        for (Eigen::Index j = 0; j < d; ++j) {
            X(i, j) = u() + (j == 0 ? y(i) * 1.5 : 0.0);
        }
    }
    return {X, y};
}

void BM_GramMatrix(benchmark::State& state) {
    const auto [X, y] = make_data(state.range(0), 16);
    const auto spec = KernelSpec::rbf(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gram_matrix(spec, X));
    }
}
BENCHMARK(BM_GramMatrix)->Arg(128)->Arg(256)->Arg(512);

void BM_ComputeWeights(benchmark::State& state) {
    const auto [X, y] = make_data(state.range(0), 16);
    const auto gram = gram_matrix(KernelSpec::rbf(0.5), X);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_weights(gram, y, 0.01, RadiusMode::centroid_max));
    }
}
BENCHMARK(BM_ComputeWeights)->Arg(128)->Arg(256)->Arg(512);

void BM_SolveBordered(benchmark::State& state) {
    const auto [X, y] = make_data(state.range(0), 16);
    const auto gram = gram_matrix(KernelSpec::rbf(0.5), X);
    const auto sys = assemble(gram, y, 1.0, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(sys));
    }
}
BENCHMARK(BM_SolveBordered)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

void BM_FitPredict(benchmark::State& state) {
    const auto [X, y] = make_data(state.range(0), 16);
    ModelParams params;
    params.kernel = KernelSpec::rbf(0.5);
    params.lambda = 0.1;
    for (auto _ : state) {
        const auto model = fit(X, y, params);
        benchmark::DoNotOptimize(predict(model, X));
    }
}
BENCHMARK(BM_FitPredict)->Arg(128)->Arg(256);

void BM_GridSearchCell(benchmark::State& state) {
    const auto [X, y] = make_data(state.range(0), 8);
    Dataset ds;
    ds.name = "bench";
    ds.X = X;
    ds.y = y;
    GridSpec grid;
    grid.eta_grid = {1.0};
    grid.lambda_grid = {1e-3, 1e-1, 10.0};
    grid.gamma_grid = {0.25, 1.0, 4.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            grid_search_cv(ds, grid, Weighting::class_informed, 5, 42));
    }
}
BENCHMARK(BM_GridSearchCell)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();

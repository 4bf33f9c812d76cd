// Benchmarks comparing the OpenMP kernels against their serial references.
// Build with -DCMAKE_BUILD_TYPE=Release and run ./srbath_bench.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "srbath/baseline.hpp"
#include "srbath/dictionary.hpp"
#include "srbath/reference.hpp"
#include "srbath/solver.hpp"
#include "srbath/timeseries.hpp"

using namespace srbath;

namespace {

GapTrajectory make_trajectory(std::size_t n) {
    std::mt19937_64 gen(12345);
    std::normal_distribution<double> dist;
    GapTrajectory traj;
    traj.dt_fs = 4.0;
    traj.samples_cm1.resize(n);
    for (auto& v : traj.samples_cm1) v = dist(gen);
    return traj;
}

std::vector<double> lag_times(std::size_t n, double dt) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = dt * static_cast<double>(k);
    return t;
}

CorrelationSeries make_corr(std::size_t n) {
    CorrelationSeries corr;
    corr.dt_fs = 4.0;
    corr.values_cm2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        corr.values_cm2[k] = std::cos(0.05 * static_cast<double>(k)) *
                             std::exp(-1e-3 * static_cast<double>(k));
    }
    return corr;
}

AtomGrid bench_grid() { return AtomGrid::make(36.0, 6.0, 800.0, 2.0); }

}  // namespace

static void BM_autocorr_omp(benchmark::State& state) {
    const auto traj = make_trajectory(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(autocorrelation(traj, traj.size() / 4));
    }
}
BENCHMARK(BM_autocorr_omp)->Arg(4096)->Arg(16384);

static void BM_autocorr_serial(benchmark::State& state) {
    const auto traj = make_trajectory(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            reference::autocorrelation(traj, traj.size() / 4));
    }
}
BENCHMARK(BM_autocorr_serial)->Arg(4096)->Arg(16384);

static void BM_cosine_transform_omp(benchmark::State& state) {
    const auto corr = make_corr(2500);
    std::vector<double> grid;
    for (double nu = 0.0; nu <= 2000.0; nu += 2.0) grid.push_back(nu);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cosine_transform_sd(corr, 77.0, grid));
    }
}
BENCHMARK(BM_cosine_transform_omp);

static void BM_cosine_transform_serial(benchmark::State& state) {
    const auto corr = make_corr(2500);
    std::vector<double> grid;
    for (double nu = 0.0; nu <= 2000.0; nu += 2.0) grid.push_back(nu);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            reference::cosine_transform_sd(corr, 77.0, grid));
    }
}
BENCHMARK(BM_cosine_transform_serial);

static void BM_dictionary_apply_omp(benchmark::State& state) {
    const Measurement meas(bench_grid(), lag_times(2500, 4.0));
    std::vector<double> coeffs(meas.n_atoms(), 0.0);
    for (std::size_t ij = 0; ij < coeffs.size(); ij += 97) coeffs[ij] = 1.0;
    std::vector<double> out(meas.n_times());
    for (auto _ : state) {
        meas.apply(coeffs, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_dictionary_apply_omp);

static void BM_dictionary_apply_serial(benchmark::State& state) {
    const Measurement meas(bench_grid(), lag_times(2500, 4.0));
    std::vector<double> coeffs(meas.n_atoms(), 0.0);
    for (std::size_t ij = 0; ij < coeffs.size(); ij += 97) coeffs[ij] = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::dictionary_apply(
            meas.grid(), meas.times_fs(), meas.scales(), coeffs));
    }
}
BENCHMARK(BM_dictionary_apply_serial);

static void BM_dictionary_adjoint_omp(benchmark::State& state) {
    const Measurement meas(bench_grid(), lag_times(2500, 4.0));
    std::vector<double> r(meas.n_times(), 1.0), out(meas.n_atoms());
    for (auto _ : state) {
        meas.apply_adjoint(r, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_dictionary_adjoint_omp);

static void BM_dictionary_adjoint_serial(benchmark::State& state) {
    const Measurement meas(bench_grid(), lag_times(2500, 4.0));
    std::vector<double> r(meas.n_times(), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::dictionary_apply_adjoint(
            meas.grid(), meas.times_fs(), meas.scales(), r));
    }
}
BENCHMARK(BM_dictionary_adjoint_serial);

static void BM_tv_prox_omp(benchmark::State& state) {
    std::vector<double> grid(27 * 1001);
    std::mt19937_64 gen(5);
    std::normal_distribution<double> dist;
    for (auto& v : grid) v = dist(gen);
    for (auto _ : state) {
        auto work = grid;
        tv_l1_prox(work, 27, 1001, 0.1, 0.05, 20);
        benchmark::DoNotOptimize(work.data());
    }
}
BENCHMARK(BM_tv_prox_omp);

static void BM_tv_prox_serial(benchmark::State& state) {
    std::vector<double> grid(27 * 1001);
    std::mt19937_64 gen(5);
    std::normal_distribution<double> dist;
    for (auto& v : grid) v = dist(gen);
    for (auto _ : state) {
        auto work = grid;
        reference::tv_l1_prox(work, 27, 1001, 0.1, 0.05, 20);
        benchmark::DoNotOptimize(work.data());
    }
}
BENCHMARK(BM_tv_prox_serial);

BENCHMARK_MAIN();

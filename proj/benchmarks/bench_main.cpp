#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "ellipsec/ellipsoid.hpp"
#include "ellipsec/gaussian.hpp"
#include "ellipsec/recovery.hpp"
#include "ellipsec/rng.hpp"
#include "ellipsec/sections.hpp"

namespace {

using namespace ellipsec;

Eigen::VectorXd dense_vector(int m, uint64_t seed) {
    RandomStream rs(seed, {0xb0u});
    return rs.normal_vector(m);
}

void bm_quasi_norm(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Eigen::VectorXd x = dense_vector(m, 1);
    const ExponentP p(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(quasi_norm(x, p));
}
BENCHMARK(bm_quasi_norm)->Arg(64)->Arg(1024);

void bm_gauge(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Ellipsoid E(ExponentP(1.5), Semiaxes::polynomial(m, 1.0));
    const Eigen::VectorXd x = dense_vector(m, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ellipsoid_gauge(x, E));
}
BENCHMARK(bm_gauge)->Arg(64)->Arg(1024);

void bm_kernel_basis(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const InfoMatrix info = sample_gaussian_info(m / 4, m, 3);
    for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(info).basis.norm());
}
BENCHMARK(bm_kernel_basis)->Arg(64)->Arg(256);

void bm_radius_p2_exact(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Ellipsoid E(ExponentP(2.0), Semiaxes::polynomial(m, 1.0));
    const Subspace S = kernel_basis(sample_gaussian_info(m / 4, m, 4));
    for (auto _ : state) benchmark::DoNotOptimize(radius_p2_exact(E, S).value);
}
BENCHMARK(bm_radius_p2_exact)->Arg(64)->Arg(256);

void bm_radius_multistart(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Ellipsoid E(ExponentP(1.5), Semiaxes::polynomial(m, 1.0));
    const Subspace S = kernel_basis(sample_gaussian_info(m / 4, m, 5));
    MaximizeOptions opts;
    opts.seed = 6;
    for (auto _ : state) benchmark::DoNotOptimize(radius_maximize(E, S, opts).value);
}
BENCHMARK(bm_radius_multistart)->Arg(32)->Arg(64);

void bm_mstar(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Ellipsoid E(ExponentP(1.5), Semiaxes::polynomial(m, 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(mstar_bound(E, 1.0, m / 8));
}
BENCHMARK(bm_mstar)->Arg(256)->Arg(4096);

void bm_decode_l1(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = m / 2;
    RandomStream rs(7, {0xb1u});
    Eigen::MatrixXd N(n, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) N(i, j) = rs.normal();
    }
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(m);
    x0[1] = 1.0;
    x0[m / 2] = -2.0;
    const Eigen::VectorXd y = N * x0;
    for (auto _ : state) benchmark::DoNotOptimize(decode_l1(N, y).objective);
}
BENCHMARK(bm_decode_l1)->Arg(32)->Arg(96);

}  // namespace

BENCHMARK_MAIN();

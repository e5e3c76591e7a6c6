#include <benchmark/benchmark.h>

#include "clks/clkernel.hpp"
#include "clks/collision.hpp"
#include "clks/cycles.hpp"
#include "clks/geometry.hpp"
#include "clks/rng.hpp"
#include "clks/special.hpp"

using namespace clks;

static void BM_PhiloxU64(benchmark::State& state) {
    RandomStream rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(rng.next_u64());
}
BENCHMARK(BM_PhiloxU64);

static void BM_I0Scaled(benchmark::State& state) {
    double y = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(i0_scaled(y));
}
BENCHMARK(BM_I0Scaled)->Arg(1)->Arg(25)->Arg(1000);

static void BM_BackwardExitBall(benchmark::State& state) {
    BallDomain ball(1.0);
    RandomStream rng(2);
    for (auto _ : state) {
        Vec3 x{0.3 * rng.normal(), 0.3 * rng.normal(), 0.3 * rng.normal()};
        if (ball.xi(x) >= 0) x = {0.1, 0.2, 0.0};
        benchmark::DoNotOptimize(backward_exit(ball, x, rng.normal3()).t_b);
    }
}
BENCHMARK(BM_BackwardExitBall);

static void BM_BackwardExitEllipsoid(benchmark::State& state) {
    EllipsoidDomain ell({1.5, 1.0, 0.8});
    RandomStream rng(2);
    for (auto _ : state) {
        Vec3 x{0.2 * rng.normal(), 0.2 * rng.normal(), 0.2 * rng.normal()};
        if (ell.xi(x) >= 0) x = {0.1, 0.2, 0.0};
        benchmark::DoNotOptimize(backward_exit(ell, x, rng.normal3()).t_b);
    }
}
BENCHMARK(BM_BackwardExitEllipsoid);

static void BM_ClLogDensity(benchmark::State& state) {
    WallModel wall = WallModel::make(TemperatureField::constant(1.0), 0.7, 0.9);
    Vec3 n{0, 0, 1}, x{0, 0, 0}, u{0.5, -0.2, 1.3}, v{0.4, 0.7, -0.9};
    for (auto _ : state) benchmark::DoNotOptimize(cl_log_density(wall, x, n, u, v));
}
BENCHMARK(BM_ClLogDensity);

static void BM_SampleOutgoing(benchmark::State& state) {
    WallModel wall = WallModel::make(TemperatureField::constant(1.0), 0.7, 0.9);
    Vec3 n{0, 0, 1}, x{0, 0, 0}, u{0.5, -0.2, 1.3};
    RandomStream rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(sample_outgoing(wall, x, n, u, rng));
}
BENCHMARK(BM_SampleOutgoing);

static void BM_KineticDistance(benchmark::State& state) {
    BallDomain ball(1.0);
    KineticWeightParams p = default_weight_params(ball);
    Vec3 x{0.4, 0.1, -0.2}, v{0.8, -0.3, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(kinetic_distance(ball, p, x, v));
}
BENCHMARK(BM_KineticDistance);

static void BM_SampleCycle(benchmark::State& state) {
    BallDomain ball(1.0);
    WallModel wall = WallModel::make(TemperatureField::constant(1.0), 1.0, 1.0);
    RandomStream rng(4);
    for (auto _ : state) {
        CycleTrace tr = sample_cycle(ball, wall, 2.0, {0.3, 0.2, 0.0}, {1.0, 0.1, 0.4},
                                     static_cast<int>(state.range(0)), rng);
        benchmark::DoNotOptimize(tr.steps.size());
    }
}
BENCHMARK(BM_SampleCycle)->Arg(2)->Arg(8);

static void BM_CollisionFrequency(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(collision_frequency_closed_form(1.7, 1.0));
}
BENCHMARK(BM_CollisionFrequency);

BENCHMARK_MAIN();

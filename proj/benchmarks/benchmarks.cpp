#include <benchmark/benchmark.h>

#include <branchlight/closed_form.hpp>
#include <branchlight/geometry.hpp>
#include <branchlight/irrigation.hpp>
#include <branchlight/optimizer.hpp>
#include <branchlight/sunlight.hpp>
#include <branchlight/theory.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace {

const double kPi = std::acos(-1.0);

branchlight::measure crossing_fan(int segments, int pieces_per_segment) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    branchlight::measure m;
    for (int i = 0; i < segments; ++i) {
        branchlight::segment s;
        s.a = {2.0 * U(rng) - 1.0, U(rng)};
        const double ang = kPi * U(rng), len = 0.3 + U(rng);
        s.b = s.a + branchlight::vec2{len * std::cos(ang), len * std::sin(ang)};
        if (s.b.y < 0.0) s.b.y = 0.0;
        const double L = (s.b - s.a).norm();
        double t = 0.0;
        for (int p = 0; p < pieces_per_segment; ++p) {
            const double t1 = (p + 1 == pieces_per_segment)
                                  ? L
                                  : L * (p + 1) / pieces_per_segment;
            s.pieces.push_back({t, t1, 0.2 + U(rng)});
            t = t1;
        }
        m.segments.push_back(s);
    }
    return m;
}

void bm_projection_merge(benchmark::State& state) {
    const branchlight::measure m =
        crossing_fan(static_cast<int>(state.range(0)), 8);
    const branchlight::direction n{0.9};
    for (auto _ : state)
        benchmark::DoNotOptimize(branchlight::project(m, n));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_projection_merge)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void bm_sunlight_single(benchmark::State& state) {
    const branchlight::measure m =
        crossing_fan(static_cast<int>(state.range(0)), 8);
    const branchlight::direction n{kPi / 4};
    for (auto _ : state)
        benchmark::DoNotOptimize(branchlight::sunlight_single(m, n));
}
BENCHMARK(bm_sunlight_single)->Arg(16)->Arg(64);

void bm_solve_ray(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            branchlight::solve_ray(0.75, 1.0, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(bm_solve_ray)->Arg(256)->Arg(1024)->Arg(4096);

void bm_ray_cost(benchmark::State& state) {
    branchlight::ray_density_plan p;
    p.angle = 0.7;
    p.ell = 2.0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    p.u.resize(static_cast<std::size_t>(state.range(0)));
    for (double& u : p.u) u = U(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(branchlight::ray_cost(p, 0.75, 1.0));
}
BENCHMARK(bm_ray_cost)->Arg(256)->Arg(4096);

void bm_bend_margin_sweep(benchmark::State& state) {
    for (auto _ : state) {
        double mn = 1e300;
        const int G = static_cast<int>(state.range(0));
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j)
                for (int k = 0; k < G; ++k)
                    mn = std::min(mn, branchlight::bypass_margin(
                                          (i + 0.5) / G, j * (kPi / 2) / (G - 1),
                                          k * (kPi / 2) / (G - 1), 0.75));
        benchmark::DoNotOptimize(mn);
    }
}
BENCHMARK(bm_bend_margin_sweep)->Arg(16)->Arg(32);

void bm_transport_bruteforce(benchmark::State& state) {
    std::vector<branchlight::atom> atoms{
        {{0.9, 0.1}, 0.4}, {{1.1, 0.5}, 0.35}, {{0.7, 0.8}, 0.25}};
    for (auto _ : state)
        benchmark::DoNotOptimize(branchlight::optimal_tree_bruteforce(atoms, 0.75));
}
BENCHMARK(bm_transport_bruteforce);

void bm_fan_ascent(benchmark::State& state) {
    branchlight::ray_family_config cfg;
    cfg.alpha = 0.75;
    cfg.c = 1.0;
    cfg.theta0 = kPi / 4;
    cfg.angles = {0.0, cfg.theta0 + kPi / 2};
    cfg.cells = static_cast<int>(state.range(0));
    cfg.seeds = {1};
    for (auto _ : state)
        benchmark::DoNotOptimize(branchlight::maximize_over_family(cfg));
}
BENCHMARK(bm_fan_ascent)->Unit(benchmark::kMillisecond)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();

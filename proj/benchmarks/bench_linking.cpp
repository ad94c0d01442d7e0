#include <benchmark/benchmark.h>

#include "linkprobe/axisym.hpp"
#include "linkprobe/chart_family.hpp"
#include "linkprobe/harness.hpp"
#include "linkprobe/linking.hpp"
#include "linkprobe/planar.hpp"
#include "linkprobe/torus.hpp"

using namespace linkprobe;

namespace {

void bm_linking_gauss(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ClosedPolyline3 ring =
        sample_curve([](double t) { return mu_a(LinkParamA{{0.01, 0.02}}, t); }, n);
    const ClosedPolyline3 vert =
        sample_curve([](double t) { return nu_b(LinkParamB{{0.97, 0.01}}, t); }, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(linking_gauss(ring, vert));
    }
    state.SetComplexityN(n);
}
BENCHMARK(bm_linking_gauss)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)
    ->Complexity(benchmark::oNSquared);

void bm_linking_crossings(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ClosedPolyline3 ring =
        sample_curve([](double t) { return mu_a(LinkParamA{{0.01, 0.02}}, t); }, n);
    const ClosedPolyline3 vert =
        sample_curve([](double t) { return nu_b(LinkParamB{{0.97, 0.01}}, t); }, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(linking_crossings_any(ring, vert));
    }
}
BENCHMARK(bm_linking_crossings)->Arg(128)->Arg(256)->Arg(512);

void bm_winding_number(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto catalog = planar_map_catalog();
    const PlanarMap& square = catalog[3]; // complex-square
    const Circle2 unit{{0.0, 0.0}, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(winding_number(square, unit, {0.3, 0.2}, n));
    }
}
BENCHMARK(bm_winding_number)->Arg(64)->Arg(256)->Arg(1024);

void bm_slice_degree_linking(benchmark::State& state) {
    const MapField3 twist = make_axisym_field(axisym_profile_catalog()[1]);
    const LinkParamA a{{0.02, 0.03}};
    const LinkParamB b{{0.98, -0.01}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(linking_via_planar_degree(twist.eval, a, b,
                                                           static_cast<int>(state.range(0))));
    }
}
BENCHMARK(bm_slice_degree_linking)->Arg(128)->Arg(256);

void bm_divergence_residual(benchmark::State& state) {
    const auto maps = planar_map_catalog_smooth();
    const auto phi = test_function_catalog()[0];
    const auto g = vector_field_catalog()[0];
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            divergence_identity_residual(maps[4], phi, g, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(bm_divergence_residual)->Arg(64)->Arg(128)->Arg(256);

void bm_build_family(benchmark::State& state) {
    const Point3 x0{2.0, 0.0, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_family(x0));
    }
}
BENCHMARK(bm_build_family);

void bm_coarea_volume_side(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_coarea_check(Fibration::Eta,
                                                  static_cast<int>(state.range(0))));
    }
}
BENCHMARK(bm_coarea_volume_side)->Arg(64)->Arg(128);

void bm_injectivity_sample(benchmark::State& state) {
    const MapField3 shear = make_axisym_field(axisym_profile_catalog()[3]);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            injectivity_sample(shear, Ball3{{2.0, 0.0, 0.0}, 0.9},
                               state.range(0), 42));
    }
}
BENCHMARK(bm_injectivity_sample)->Arg(10000)->Arg(20000)
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

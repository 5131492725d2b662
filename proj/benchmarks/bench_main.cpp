// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "bdris/siso.hpp"

namespace {

using namespace bdris;

SisoChannels make_channels(int m) {
    ChannelConfig cfg;
    cfg.m = m;
    return generate_siso(cfg, 7);
}

void bm_scattering_round_trip(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ArchitectureSpec spec{m, m, Topology::group, 1};
    const MappingMatrices maps = build_mappings(spec);
    const AdmittanceArc arc = arc_of_params(CircuitParams{});
    const VectorXc ybar = VectorXc::Constant(maps.u, arc.value_at(arc.midpoint()));
    const AdmittanceMatrix y =
        assemble_block_diagonal({ybar_to_block(maps.b, maps.p, ybar)});
    for (auto _ : state) {
        const ScatteringMatrix phi = admittance_to_scattering(y);
        benchmark::DoNotOptimize(scattering_to_admittance(phi));
    }
}
BENCHMARK(bm_scattering_round_trip)->Arg(4)->Arg(8)->Arg(16);

void bm_arc_projection(benchmark::State& state) {
    const AdmittanceArc arc = arc_of_params(CircuitParams{});
    cplx w(0.02, 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_onto_arc(arc, w));
        w += cplx(1e-6, -1e-6);
    }
}
BENCHMARK(bm_arc_projection);

void bm_mm_admm(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int mbar = static_cast<int>(state.range(1));
    const SisoChannels ch = make_channels(m);
    const ArchitectureSpec spec{m, mbar, Topology::group, 1};
    MmAdmmConfig cfg;
    cfg.max_outer = 3;
    cfg.max_inner = 50;
    for (auto _ : state)
        benchmark::DoNotOptimize(mm_admm_solve(ch, spec, CircuitParams{}, cfg));
}
BENCHMARK(bm_mm_admm)->Args({8, 2})->Args({8, 8});

void bm_low_complexity(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const SisoChannels ch = make_channels(m);
    const ArchitectureSpec spec{m, m, Topology::group, 1};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            low_complexity_solve(ch, spec, CircuitParams{}, MmAdmmConfig{}));
}
BENCHMARK(bm_low_complexity)->Arg(8)->Arg(16);

} // namespace

BENCHMARK_MAIN();

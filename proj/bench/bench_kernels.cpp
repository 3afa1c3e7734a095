#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "latrad/kernels.hpp"
#include "latrad/lattice.hpp"
#include "latrad/surface_mesh.hpp"

using namespace latrad;

namespace {

std::vector<LatticeSite> sites_2d(int r) { return box_sites(2, r); }

std::vector<cplx> torus_values(const kernels::TorusGrid& g) {
    return kernels::tabulate(g, [](std::span<const double> k) {
        return cplx(1.0, 0.0) / cplx(2.0 * (std::cos(k[0]) + std::cos(k[1])) - 3.0, 0.05);
    });
}

template <bool Serial>
void BM_torus(benchmark::State& state) {
    const kernels::TorusGrid grid{2, static_cast<int>(state.range(0))};
    const auto values = torus_values(grid);
    const auto sites = sites_2d(4);
    for (auto _ : state) {
        auto r = Serial ? kernels::torus_phase_sum_serial(grid, values, sites)
                        : kernels::torus_phase_sum(grid, values, sites);
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(state.iterations() * grid.size() * static_cast<long long>(sites.size()));
}

template <bool Serial>
void BM_nodes(benchmark::State& state) {
    const SurfaceMesh mesh = surface_mesh(3.0, 2, static_cast<int>(state.range(0)));
    kernels::PhaseNodes nodes{2, mesh.k, std::vector<cplx>(mesh.weight.begin(), mesh.weight.end())};
    const auto sites = sites_2d(8);
    for (auto _ : state) {
        auto r = Serial ? kernels::node_phase_sum_serial(nodes, sites) : kernels::node_phase_sum(nodes, sites);
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(nodes.size() * sites.size()));
}

} // namespace

BENCHMARK(BM_torus<true>)->Name("torus_phase_sum/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_torus<false>)->Name("torus_phase_sum/parallel")->Arg(64)->Arg(256);
BENCHMARK(BM_nodes<true>)->Name("node_phase_sum/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_nodes<false>)->Name("node_phase_sum/parallel")->Arg(256)->Arg(1024);

BENCHMARK_MAIN();

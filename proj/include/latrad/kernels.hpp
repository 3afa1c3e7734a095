#pragma once

// Data-parallel summation kernels behind every quadrature in the library.
//
// Each parallel kernel has a serial reference twin (suffix _serial) that
// computes the same sum in the most direct way. The twins exist for tests
// and for the benchmark; library code calls the parallel versions.
//
// Parallel kernels are bit-stable for a fixed input: partial sums are formed
// over fixed blocks in a fixed order and combined by pairwise tree summation,
// so the result does not depend on the number of OpenMP threads.

#include <complex>
#include <span>
#include <vector>

#include "latrad/lattice.hpp"

namespace latrad::kernels {

/// Pairwise (tree) summation in index order.
cplx pairwise_sum(std::span<const cplx> values);
double pairwise_sum(std::span<const double> values);

/// Uniform torus grid: k_i = -pi + 2 pi i / n along each axis, n^d nodes in
/// row-major order (last coordinate fastest).
struct TorusGrid {
    int d = 1;
    int n = 16;

    long long size() const;
    double node(int i) const;
};

/// Tabulates g(k) on every grid node. `g` receives a span of d coordinates.
template <class F>
std::vector<cplx> tabulate(const TorusGrid& grid, F&& g);

/// sum_nodes values[node] * exp(i k_node . xi) for every site.
std::vector<cplx> torus_phase_sum(const TorusGrid& grid, std::span<const cplx> values,
                                  std::span<const LatticeSite> sites);
std::vector<cplx> torus_phase_sum_serial(const TorusGrid& grid, std::span<const cplx> values,
                                         std::span<const LatticeSite> sites);

/// Scattered nodes with complex weights (surface quadrature).
struct PhaseNodes {
    int d = 1;
    std::vector<double> k;       // size() * d coordinates
    std::vector<cplx> weight;

    size_t size() const noexcept { return weight.size(); }
};

/// sum_nodes weight[n] * exp(i k_n . xi) for every site.
std::vector<cplx> node_phase_sum(const PhaseNodes& nodes, std::span<const LatticeSite> sites);
std::vector<cplx> node_phase_sum_serial(const PhaseNodes& nodes, std::span<const LatticeSite> sites);

// ------------------------------------------------------------------------

template <class F>
std::vector<cplx> tabulate(const TorusGrid& grid, F&& g) {
    const long long total = grid.size();
    std::vector<cplx> out(static_cast<size_t>(total));
    const int d = grid.d;
#pragma omp parallel
    {
        std::vector<double> k(static_cast<size_t>(d));
#pragma omp for schedule(static)
        for (long long idx = 0; idx < total; ++idx) {
            long long rem = idx;
            for (int j = d - 1; j >= 0; --j) {
                k[static_cast<size_t>(j)] = grid.node(static_cast<int>(rem % grid.n));
                rem /= grid.n;
            }
            out[static_cast<size_t>(idx)] = g(std::span<const double>(k));
        }
    }
    return out;
}

} // namespace latrad::kernels

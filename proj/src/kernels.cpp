#include "latrad/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace latrad::kernels {

namespace {

constexpr size_t kBlock = 1024;

template <class T>
T pairwise_impl(const T* v, size_t n) {
    if (n <= 8) {
        T s{};
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const size_t h = n / 2;
    return pairwise_impl(v, h) + pairwise_impl(v + h, n - h);
}

struct AxisRange {
    int lo = 0;
    int hi = 0;
};

std::vector<AxisRange> axis_ranges(int d, std::span<const LatticeSite> sites) {
    std::vector<AxisRange> r(static_cast<size_t>(d));
    bool first = true;
    for (const auto& s : sites) {
        if (s.dim() != d) throw Error(ErrorCode::dimension_mismatch, "site dimension differs from grid dimension");
        for (int j = 0; j < d; ++j) {
            auto& a = r[static_cast<size_t>(j)];
            if (first) a.lo = a.hi = s[j];
            a.lo = std::min(a.lo, s[j]);
            a.hi = std::max(a.hi, s[j]);
        }
        first = false;
    }
    return r;
}

} // namespace

cplx pairwise_sum(std::span<const cplx> values) { return pairwise_impl(values.data(), values.size()); }
double pairwise_sum(std::span<const double> values) { return pairwise_impl(values.data(), values.size()); }

long long TorusGrid::size() const {
    long long s = 1;
    for (int j = 0; j < d; ++j) s *= n;
    return s;
}

double TorusGrid::node(int i) const { return -std::numbers::pi + 2.0 * std::numbers::pi * i / n; }

// The grid sum factorises over coordinates. Contract the last axis first
// against every distinct site coordinate along it, then the next one, and so
// on; each contraction is a serial loop so the result is thread-independent.
std::vector<cplx> torus_phase_sum(const TorusGrid& grid, std::span<const cplx> values,
                                  std::span<const LatticeSite> sites) {
    const int d = grid.d;
    const int n = grid.n;
    if (static_cast<long long>(values.size()) != grid.size())
        throw Error(ErrorCode::dimension_mismatch, "grid values do not match grid size");
    if (sites.empty()) return {};
    const auto ranges = axis_ranges(d, sites);

    // phase[j][m][i] = exp(i k_i (lo_j + m))
    std::vector<std::vector<cplx>> phase(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        const auto& a = ranges[static_cast<size_t>(j)];
        const int width = a.hi - a.lo + 1;
        auto& ph = phase[static_cast<size_t>(j)];
        ph.resize(static_cast<size_t>(width) * n);
        for (int m = 0; m < width; ++m)
            for (int i = 0; i < n; ++i)
                ph[static_cast<size_t>(m) * n + i] = std::polar(1.0, grid.node(i) * (a.lo + m));
    }

    // cur holds an array indexed [outer][tail], outer over remaining grid axes,
    // tail over the site coordinates of already contracted axes.
    std::vector<cplx> cur(values.begin(), values.end());
    long long outer = grid.size();
    long long tail = 1;
    for (int j = d - 1; j >= 0; --j) {
        const auto& a = ranges[static_cast<size_t>(j)];
        const int width = a.hi - a.lo + 1;
        const long long new_outer = outer / n;
        const long long new_tail = tail * width;
        std::vector<cplx> next(static_cast<size_t>(new_outer * new_tail));
        const auto& ph = phase[static_cast<size_t>(j)];
#pragma omp parallel for schedule(static)
        for (long long o = 0; o < new_outer; ++o) {
            for (int m = 0; m < width; ++m) {
                const cplx* p = &ph[static_cast<size_t>(m) * n];
                for (long long t = 0; t < tail; ++t) {
                    cplx s{};
                    for (int i = 0; i < n; ++i) s += p[i] * cur[static_cast<size_t>((o * n + i) * tail + t)];
                    next[static_cast<size_t>(o * new_tail + m * tail + t)] = s;
                }
            }
        }
        cur.swap(next);
        outer = new_outer;
        tail = new_tail;
    }

    std::vector<cplx> out(sites.size());
    for (size_t s = 0; s < sites.size(); ++s) {
        // tail index: axis d-1 is the fastest-varying block, axis 0 the slowest
        long long idx = 0;
        for (int j = 0; j < d; ++j) {
            const auto& a = ranges[static_cast<size_t>(j)];
            idx = idx * (a.hi - a.lo + 1) + (sites[s][j] - a.lo);
        }
        // the contraction order makes axis 0 the most significant digit
        out[s] = cur[static_cast<size_t>(idx)];
    }
    return out;
}

std::vector<cplx> torus_phase_sum_serial(const TorusGrid& grid, std::span<const cplx> values,
                                         std::span<const LatticeSite> sites) {
    const int d = grid.d;
    std::vector<cplx> out(sites.size());
    std::vector<double> k(static_cast<size_t>(d));
    for (size_t s = 0; s < sites.size(); ++s) {
        cplx sum{};
        for (long long idx = 0; idx < grid.size(); ++idx) {
            long long rem = idx;
            double phase = 0.0;
            for (int j = d - 1; j >= 0; --j) {
                phase += grid.node(static_cast<int>(rem % grid.n)) * sites[s][j];
                rem /= grid.n;
            }
            sum += values[static_cast<size_t>(idx)] * std::polar(1.0, phase);
        }
        out[s] = sum;
    }
    return out;
}

std::vector<cplx> node_phase_sum(const PhaseNodes& nodes, std::span<const LatticeSite> sites) {
    const int d = nodes.d;
    const size_t count = nodes.size();
    if (nodes.k.size() != count * static_cast<size_t>(d))
        throw Error(ErrorCode::dimension_mismatch, "node coordinates do not match node count");
    if (sites.empty()) return {};
    const auto ranges = axis_ranges(d, sites);
    std::vector<size_t> offset(static_cast<size_t>(d) + 1, 0);
    for (int j = 0; j < d; ++j)
        offset[static_cast<size_t>(j) + 1] =
            offset[static_cast<size_t>(j)] + static_cast<size_t>(ranges[static_cast<size_t>(j)].hi -
                                                                ranges[static_cast<size_t>(j)].lo + 1);

    const size_t nblocks = (count + kBlock - 1) / kBlock;
    const size_t nsites = sites.size();
    std::vector<cplx> partial(nblocks * nsites);

#pragma omp parallel
    {
        std::vector<cplx> table(offset.back());
        std::vector<cplx> acc(nsites);
#pragma omp for schedule(static)
        for (size_t b = 0; b < nblocks; ++b) {
            std::fill(acc.begin(), acc.end(), cplx{});
            const size_t end = std::min(count, (b + 1) * kBlock);
            for (size_t node = b * kBlock; node < end; ++node) {
                const double* kn = &nodes.k[node * static_cast<size_t>(d)];
                for (int j = 0; j < d; ++j) {
                    const auto& a = ranges[static_cast<size_t>(j)];
                    cplx* t = &table[offset[static_cast<size_t>(j)]];
                    const cplx step = std::polar(1.0, kn[j]);
                    cplx v = std::polar(1.0, kn[j] * a.lo);
                    for (int m = 0; m <= a.hi - a.lo; ++m) {
                        t[m] = v;
                        v *= step;
                    }
                }
                const cplx w = nodes.weight[node];
                for (size_t s = 0; s < nsites; ++s) {
                    cplx p = w;
                    for (int j = 0; j < d; ++j)
                        p *= table[offset[static_cast<size_t>(j)] +
                                   static_cast<size_t>(sites[s][j] - ranges[static_cast<size_t>(j)].lo)];
                    acc[s] += p;
                }
            }
            for (size_t s = 0; s < nsites; ++s) partial[s * nblocks + b] = acc[s];
        }
    }

    std::vector<cplx> out(nsites);
    for (size_t s = 0; s < nsites; ++s)
        out[s] = pairwise_sum(std::span<const cplx>(&partial[s * nblocks], nblocks));
    return out;
}

std::vector<cplx> node_phase_sum_serial(const PhaseNodes& nodes, std::span<const LatticeSite> sites) {
    const int d = nodes.d;
    std::vector<cplx> out(sites.size());
    for (size_t s = 0; s < sites.size(); ++s) {
        cplx sum{};
        for (size_t node = 0; node < nodes.size(); ++node) {
            double phase = 0.0;
            for (int j = 0; j < d; ++j) phase += nodes.k[node * static_cast<size_t>(d) + static_cast<size_t>(j)] * sites[s][j];
            sum += nodes.weight[node] * std::polar(1.0, phase);
        }
        out[s] = sum;
    }
    return out;
}

} // namespace latrad::kernels

#include "doctest.h"

#include <cmath>

#include "latrad/error.hpp"
#include "latrad/reduced_green.hpp"
#include "latrad/resolvent.hpp"

using namespace latrad;

TEST_CASE("one-dimensional closed form") {
    for (cplx z : {cplx(3.0, 0.0), cplx(-2.5, 0.0), cplx(0.4, 0.3), cplx(1.0, -1e-6), cplx(0.0, 4.0)}) {
        for (int n = -6; n <= 6; ++n) {
            const cplx lhs = reduced::green_1d(n + 1, z) + reduced::green_1d(n - 1, z) - z * reduced::green_1d(n, z);
            CHECK(std::abs(lhs - (n == 0 ? cplx(1.0) : cplx(0.0))) < 1e-12);
            CHECK(reduced::green_1d(n, z) == reduced::green_1d(-n, z));
        }
        // decaying branch
        CHECK(std::abs(reduced::green_1d(40, z)) < std::abs(reduced::green_1d(0, z)));
    }
    CHECK(std::abs(reduced::green_1d(0, cplx(0.0, 4.0)) - cplx(0.0, 1.0 / std::sqrt(20.0))) < 1e-14);
    CHECK(reduced::green_1d(0, cplx(-3.0, 0.0)).real() == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("reduced green function matches the torus rule off the spectrum") {
    QuadratureConfig cfg;
    for (int d : {2, 3}) {
        cfg.torus_order = d == 2 ? 512 : 160;
        for (cplx eta : {cplx(1.0, 0.5), cplx(-2.0, 0.8), cplx(7.5, 0.0)}) {
            const auto sites = box_sites(d, 2);
            const auto torus = resolvent_offspectrum(CompactLatticeFunction::delta(LatticeSite::origin(d)), eta, sites, cfg);
            for (const auto& t : torus) {
                const cplx g = reduced::green(t.site.coords(), eta, 1e-13, 1e-12);
                CHECK(std::abs(g - t.value) < 1e-9);
            }
        }
    }
}

TEST_CASE("reduced green function solves the lattice equation near the real axis") {
    const cplx eta(2.5, 1e-6);
    auto g = [&](int a, int b) {
        const std::vector<int> x{a, b};
        return reduced::green(x, eta, 1e-13, 1e-11);
    };
    for (int a = -2; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
            const cplx lhs = g(a + 1, b) + g(a - 1, b) + g(a, b + 1) + g(a, b - 1) - eta * g(a, b);
            CHECK(std::abs(lhs - (a == 0 && b == 0 ? cplx(1.0) : cplx(0.0))) < 1e-8);
        }
    // symmetry of the symbol
    CHECK(std::abs(g(2, 1) - g(-1, 2)) < 1e-11);
}

TEST_CASE("reduced green function rejects the spectrum") {
    const std::vector<int> x{0, 0};
    CHECK_THROWS_AS(reduced::green(x, cplx(1.0, 0.0), 1e-12, 1e-10), Error);
    CHECK_NOTHROW(reduced::green(x, cplx(100.0, 0.0), 1e-12, 1e-10));
    CHECK(reduced::green(x, cplx(100.0, 0.0), 1e-14, 1e-13).real() == doctest::Approx(-0.010004003604).epsilon(1e-10));
}

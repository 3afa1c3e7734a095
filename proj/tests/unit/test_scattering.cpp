#include "doctest.h"

#include <cmath>
#include <random>

#include "latrad/error.hpp"
#include "latrad/farfield.hpp"
#include "latrad/quadrature.hpp"
#include "latrad/scattering.hpp"

#include "../support/box_oracle.hpp"
#include "../support/fields.hpp"

using namespace latrad;

namespace {

const QuadratureConfig cfg{};

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::invalid_argument;
}

CompactLatticeFunction small_random(int d, double scale, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CompactLatticeFunction::Map m;
    for (const auto& s : box_sites(d, 1))
        if (u(rng) > 0.2) m.emplace(s, scale * u(rng));
    if (m.empty()) m.emplace(LatticeSite::origin(d), scale);
    return CompactLatticeFunction(d, std::move(m));
}

} // namespace

TEST_CASE("assembly") {
    const auto bv = BoundaryValue::limit(3.0, Side::plus);
    const auto empty = assemble(CompactLatticeFunction(2), bv, cfg);
    CHECK(empty.size() == 0);
    const auto q = CompactLatticeFunction(2, {{LatticeSite{0, 0}, 0.5}, {LatticeSite{1, 0}, -1.0}, {LatticeSite{0, 2}, 2.0}});
    const auto sys = assemble(q, bv, cfg);
    CHECK(sys.size() == 3);
    CHECK(sys.matrix.rows() == 3);
    // row x carries q(x) G(x - y)
    const auto g = fundamental_solution(bv, LatticeSite{1, -2}, cfg).value;
    const auto& s = sys.support_sites;
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j)
            if (s[i] - s[j] == LatticeSite{1, -2})
                CHECK(std::abs(sys.matrix(static_cast<long>(i), static_cast<long>(j)) - q(s[i]) * g) < 1e-12);
    for (double lambda : {-2.5, -4.0}) {
        const double c = 0.8;
        const auto m = assemble(CompactLatticeFunction(1, {{LatticeSite{0}, c}}), BoundaryValue::limit(lambda, Side::plus), cfg);
        CHECK(std::abs(m.matrix(0, 0) - (1.0 + c / std::sqrt(lambda * lambda - 4.0))) < 1e-12);
    }
}

TEST_CASE("scattering reduces to the free resolvent") {
    const auto f = CompactLatticeFunction(2, {{LatticeSite{0, 0}, 1.0}, {LatticeSite{1, 1}, -0.3}});
    const auto sites = box_sites(2, 3);
    const auto bv = BoundaryValue::limit(2.5, Side::plus);
    const auto a = solve_scattering(f, CompactLatticeFunction(2), bv, sites, cfg);
    const auto b = lap_apply(f, bv, sites, cfg);
    for (size_t i = 0; i < sites.size(); ++i) CHECK(std::abs(a.values[i].value - b[i].value) < 1e-14);
}

TEST_CASE("correspondence round trip off the real axis") {
    std::mt19937 rng(17);
    for (int d = 1; d <= 3; ++d) {
        const auto q = small_random(d, 0.8, rng), f = small_random(d, 1.0, rng);
        for (cplx eta : {cplx(1.0, 0.4), cplx(-1.5, -0.2)}) {
            const int w = d == 3 ? 2 : 4;
            const auto sol = solve_scattering(f, q, BoundaryValue::complex(eta), box_sites(d, w + 1), cfg);
            const testing::SampledField psi(sol.values);
            for (const auto& x : box_sites(d, w)) {
                const cplx r = laplacian_at(psi.fn(), x) + (q(x) - eta) * psi(x) - f(x);
                CHECK(std::abs(r) < 1e-8);
            }
        }
    }
}

TEST_CASE("limiting values agree with an eta ladder on the perturbed problem") {
    std::mt19937 rng(23);
    const auto q = small_random(2, 0.5, rng);
    const auto f = CompactLatticeFunction::delta(LatticeSite{0, 0});
    const auto sites = box_sites(2, 3);
    const auto lap = solve_scattering(f, q, BoundaryValue::limit(3.0, Side::plus), sites, cfg);
    std::vector<double> eps;
    std::vector<std::vector<cplx>> rows;
    for (int i = 0; i <= 8; ++i) {
        eps.push_back(0.2 / std::pow(2.0, i));
        const auto s = solve_scattering(f, q, BoundaryValue::complex(cplx(3.0, eps.back())), sites, cfg);
        std::vector<cplx> v;
        for (const auto& r : s.values) v.push_back(r.value);
        rows.push_back(v);
    }
    for (size_t j = 0; j < sites.size(); ++j) {
        const std::vector<double> x(eps.end() - 4, eps.end());
        std::vector<cplx> y;
        for (size_t i = rows.size() - 4; i < rows.size(); ++i) y.push_back(rows[i][j]);
        CHECK(std::abs(neville_at_zero(x, y) - lap.values[j].value) < 1e-4);
    }
}

TEST_CASE("conjugation and far field of scattered waves") {
    const auto q = CompactLatticeFunction(2, {{LatticeSite{0, 0}, 0.7}, {LatticeSite{1, 0}, -0.4}});
    const auto f = CompactLatticeFunction::delta(LatticeSite{0, 0});
    std::vector<LatticeSite> sites;
    for (int n = 10; n <= 40; n += 10) sites.push_back(LatticeSite{n, 0});
    const auto p = solve_scattering(f, q, BoundaryValue::limit(3.0, Side::plus), sites, cfg);
    const auto m = solve_scattering(f, q, BoundaryValue::limit(3.0, Side::minus), sites, cfg);
    for (size_t i = 0; i < sites.size(); ++i) CHECK(std::abs(m.values[i].value - std::conj(p.values[i].value)) < 1e-13);
    const testing::SampledField psi(p.values);
    const std::vector<double> radii{10, 20, 30, 40};
    CHECK(farfield_decay_fit(psi.fn(), Direction({1.0, 0.0}), radii).slope == doctest::Approx(-0.5).epsilon(0.15));
}

TEST_CASE("scattering errors") {
    const auto q = CompactLatticeFunction(2, {{LatticeSite{0, 0}, 0.7}});
    const auto f = CompactLatticeFunction::delta(LatticeSite{0, 0});
    const std::vector<LatticeSite> s{LatticeSite{0, 0}};
    CHECK(code_of([&] { solve_scattering(f, q, BoundaryValue::limit(0.0, Side::plus), s, cfg); }) ==
          ErrorCode::in_exceptional_set);
    CHECK(code_of([&] { solve_scattering(f, q, BoundaryValue::limit(3.0, Side::plus), s, cfg, 2.0); }) ==
          ErrorCode::near_singular_system);
    CHECK(code_of([&] { solve_scattering(f, CompactLatticeFunction(1), BoundaryValue::limit(1.0, Side::plus), s, cfg); }) ==
          ErrorCode::dimension_mismatch);
    CHECK(code_of([&] { bound_state_scan(CompactLatticeFunction::delta(LatticeSite{0}, cplx(0, 1)), {}, cfg); }) ==
          ErrorCode::invalid_argument);
}

TEST_CASE("bound states") {
    const auto r1 = bound_state_scan(CompactLatticeFunction(1, {{LatticeSite{0}, -3.0}}), {}, cfg);
    REQUIRE(r1.below.size() == 1);
    CHECK(r1.above.empty());
    CHECK(std::abs(r1.below[0].lambda + std::sqrt(13.0)) < 1e-7);
    CHECK(r1.count_below == 1);
    CHECK(r1.n == 1);

    const auto none = bound_state_scan(CompactLatticeFunction(2), {}, cfg);
    CHECK(none.count_below + none.count_above == 0);

    // weak potentials in d = 3 bind nothing
    const auto weak = bound_state_scan(CompactLatticeFunction(3, {{LatticeSite{0, 0, 0}, -0.5}}), {}, cfg);
    CHECK(weak.count_below == 0);

    const auto q2 = CompactLatticeFunction(2, {{LatticeSite{0, 0}, -4.0}, {LatticeSite{1, 0}, 2.0}, {LatticeSite{-1, 0}, 2.0},
                                               {LatticeSite{0, 1}, 2.0}, {LatticeSite{0, -1}, 2.0}});
    const auto r2 = bound_state_scan(q2, {}, cfg);
    REQUIRE(r2.below.size() == 1);
    REQUIRE(r2.above.size() == 1);
    CHECK(r2.below[0].lambda == doctest::Approx(-4.7429840356).epsilon(1e-9));
    CHECK(r2.above[0].lambda == doctest::Approx(4.2410542339).epsilon(1e-9));
    for (const auto& z : r2.below) CHECK(std::abs(bound_state_determinant(q2, z.lambda, cfg)) < 1e-6);
    for (const auto& z : r2.above) CHECK(std::abs(bound_state_determinant(q2, z.lambda, cfg)) < 1e-6);
    const auto box = testing::box_bound_states(q2, 30);
    REQUIRE(box.size() == 2);
    CHECK(std::abs(box[0] - r2.below[0].lambda) < 1e-3);
    CHECK(std::abs(box[1] - r2.above[0].lambda) < 1e-3);
    CHECK_THROWS_AS(bound_state_determinant(q2, 3.0, cfg), Error);
}

TEST_CASE("even-order zeros are caught by the magnitude sweep") {
    // two decoupled far-apart wells of equal depth: det ~ (lambda - e)^2 up to tunnelling
    const auto q = CompactLatticeFunction(1, {{LatticeSite{-40}, -3.0}, {LatticeSite{40}, -3.0}});
    const auto r = bound_state_scan(q, {}, cfg);
    CHECK(r.count_below == 2);
    for (const auto& z : r.below) CHECK(z.lambda == doctest::Approx(-std::sqrt(13.0)).epsilon(1e-6));
}

TEST_CASE("count bound on random potentials") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int t = 0; t < 12; ++t) {
        const int d = 1 + t % 2;
        CompactLatticeFunction::Map m;
        for (const auto& s : box_sites(d, 1))
            if (u(rng) > 0) m.emplace(s, u(rng));
        if (m.empty()) continue;
        const auto q = CompactLatticeFunction(d, std::move(m));
        const auto r = bound_state_scan(q, {}, cfg);
        CHECK(r.count_below <= r.n);
        CHECK(r.count_above <= r.n);
    }
}

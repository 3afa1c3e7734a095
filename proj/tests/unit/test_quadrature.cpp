#include "doctest.h"

#include <cmath>
#include <numbers>

#include "latrad/quadrature.hpp"

using namespace latrad;

TEST_CASE("gauss legendre") {
    for (int n : {2, 5, 24, 64}) {
        const auto r = gauss_legendre(n);
        REQUIRE(r.nodes.size() == static_cast<size_t>(n));
        double w = 0.0;
        for (double x : r.weights) w += x;
        CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
        for (size_t i = 1; i < r.nodes.size(); ++i) CHECK(r.nodes[i - 1] < r.nodes[i]);
        // exact for degree 2n - 1
        for (int p = 0; p < 2 * n; ++p) {
            double s = 0.0;
            for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(std::abs(s - exact) < 1e-13);
        }
    }
}

TEST_CASE("smooth cutoff") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double v = smooth_step(i / 100.0);
        CHECK(v >= prev);
        prev = v;
    }
    const double delta = 0.4;
    CHECK(smooth_cutoff(0.0, delta) == 1.0);
    CHECK(smooth_cutoff(0.2, delta) == 1.0);
    CHECK(smooth_cutoff(-0.2, delta) == 1.0);
    CHECK(smooth_cutoff(0.4, delta) == 0.0);
    CHECK(smooth_cutoff(-0.5, delta) == 0.0);
    CHECK(smooth_cutoff(0.3, delta) == doctest::Approx(smooth_cutoff(-0.3, delta)));
    CHECK((smooth_cutoff(0.3, delta) > 0.0 && smooth_cutoff(0.3, delta) < 1.0));
}

TEST_CASE("adaptive quadrature") {
    const auto a = integrate_adaptive([](double x) { return cplx(std::exp(x), std::sin(x)); }, 0.0, 1.0, 1e-14, 1e-14);
    CHECK(std::abs(a.value - cplx(std::exp(1.0) - 1.0, 1.0 - std::cos(1.0))) < 1e-13);
    const auto s = integrate_adaptive([](double x) { return cplx(1.0 / std::sqrt(x), 0.0); }, 0.0, 1.0, 1e-12, 1e-12);
    CHECK(std::abs(s.value.real() - 2.0) < 1e-7);
    CHECK(std::abs(s.value.real() - 2.0) <= s.error);
    const auto deep = integrate_adaptive([](double x) { return cplx(1.0 / std::sqrt(x), 0.0); }, 0.0, 1.0, 1e-12, 1e-12, 80);
    CHECK(std::abs(deep.value.real() - 2.0) < 1e-11);
    const std::vector<double> pts{-1.0, 0.0, 2.0};
    const auto k = integrate_adaptive([](double x) { return cplx(std::abs(x), 0.0); }, pts, 1e-14, 1e-14);
    CHECK(std::abs(k.value.real() - 2.5) < 1e-13);
}

TEST_CASE("neville and line fit") {
    const std::vector<double> x{0.4, 0.2, 0.1, 0.05};
    std::vector<cplx> y;
    for (double t : x) y.push_back(cplx(1.0 + 2.0 * t - t * t * t, 3.0 * t));
    CHECK(std::abs(neville_at_zero(x, y) - cplx(1.0, 0.0)) < 1e-13);
    const std::vector<double> xs{1, 2, 3, 4}, ys{3, 5, 7, 9};
    const auto f = fit_line(xs, ys);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.rms_residual < 1e-12);
}

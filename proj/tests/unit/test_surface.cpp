#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "latrad/dispersion.hpp"
#include "latrad/error.hpp"
#include "latrad/quadrature.hpp"
#include "latrad/surface_mesh.hpp"

using namespace latrad;

namespace {

constexpr double pi = std::numbers::pi;

// |{k in T^2 : phi(k) > lambda}| by adaptive quadrature in k_1
double upper_area(double lambda) {
    auto g = [&](double x) {
        const double c = std::clamp(lambda / 2.0 - std::cos(x), -1.0, 1.0);
        return cplx(2.0 * std::acos(c), 0.0);
    };
    return integrate_adaptive(g, -pi, pi, 1e-14, 1e-14, 50).value.real();
}

} // namespace

TEST_CASE("mesh nodes lie on the level set") {
    for (int d : {1, 2, 3}) {
        for (double lambda : {0.5 * d, -0.8 * d, 1.7}) {
            const auto mesh = surface_mesh(lambda, d, d == 3 ? 48 : 128);
            REQUIRE(mesh.size() > 0);
            for (size_t i = 0; i < mesh.size(); ++i) {
                CHECK(std::abs(phi(mesh.point(i)) - lambda) < 1e-10);
                CHECK(mesh.weight[i] > 0.0);
                CHECK(std::isfinite(mesh.weight[i]));
            }
        }
    }
}

TEST_CASE("mesh weights integrate ds / |grad phi|") {
    // the integral equals -dA/dlambda for A the measure of {phi > lambda}
    for (double lambda : {3.0, 1.0, -2.5}) {
        const double h = 1e-4;
        const double exact = -(upper_area(lambda + h) - upper_area(lambda - h)) / (2 * h);
        const auto mesh = surface_mesh(lambda, 2, 512);
        double sum = 0.0, coarse = 0.0;
        for (size_t i = 0; i < mesh.size(); ++i) {
            sum += mesh.weight[i];
            if (mesh.coarse[i]) coarse += 2.0 * mesh.weight[i];
        }
        CHECK(sum == doctest::Approx(exact).epsilon(1e-7));
        CHECK(coarse == doctest::Approx(exact).epsilon(1e-4));
    }
}

TEST_CASE("total measure is resolution independent") {
    for (double lambda : {3.0, 1.0, -2.5}) {
        const double a = surface_mesh(lambda, 2, 256).total_measure();
        const double b = surface_mesh(lambda, 2, 512).total_measure();
        CHECK(std::abs(a - b) < 1e-6);
    }
    // d = 1: two points, measure counts them
    CHECK(surface_mesh(1.0, 1, 8).size() == 2);
}

TEST_CASE("mesh shape examples") {
    const auto m3 = surface_mesh(3.0, 2, 256);
    for (double x : m3.k) CHECK(std::abs(x) < pi - 0.5);
    const auto m0 = surface_mesh(0.0, 2, 256);
    double best = 1e9;
    for (size_t i = 0; i < m0.size(); ++i) {
        const std::vector<double> target{pi / 2, pi / 2};
        best = std::min(best, torus_distance(m0.point(i), target));
    }
    CHECK(best < 1e-12);
    CHECK_THROWS_AS(surface_mesh(1.0, 2, 1), Error);
    try {
        surface_mesh(4.5, 2, 64);
        FAIL("expected empty_surface");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::empty_surface);
    }
}

TEST_CASE("mesh export") {
    const auto mesh = surface_mesh(3.0, 2, 16);
    std::ostringstream os;
    write_mesh_csv(os, mesh);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "patch_id,k_1,k_2,weight");
    size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == mesh.size());

    for (double lambda : {1.0, 0.0, 3.0}) {
        const auto segs = level_curve_segments(lambda, 256, -pi);
        CHECK(segs.size() > 100);
        for (const auto& s : segs) {
            const std::vector<double> a{s.x0, s.y0}, b{s.x1, s.y1};
            CHECK(std::abs(phi(a) - lambda) < 1e-3);
            CHECK(std::abs(phi(b) - lambda) < 1e-3);
        }
    }
    std::ostringstream svg2, svg3;
    write_surface_svg(svg2, 1.0, 2, 128);
    CHECK(svg2.str().find("<svg") != std::string::npos);
    CHECK(svg2.str().find("<polyline") != std::string::npos);
    write_surface_svg(svg3, 3.0, 3, 64);
    CHECK(svg3.str().find("<polyline") != std::string::npos);
    std::ostringstream again;
    write_surface_svg(again, 1.0, 2, 128);
    CHECK(again.str() == svg2.str());
}

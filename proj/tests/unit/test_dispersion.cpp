#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "latrad/dispersion.hpp"
#include "latrad/error.hpp"

using namespace latrad;

namespace {

constexpr double pi = std::numbers::pi;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

TEST_CASE("symbol examples") {
    const std::vector<double> zero{0.0, 0.0, 0.0};
    auto s = symbol(zero);
    CHECK(s.value == 6.0);
    CHECK(s.gradient_norm() == 0.0);
    for (double h : s.hessian_diagonal) CHECK(h == -2.0);
    const std::vector<double> corner{pi, pi};
    s = symbol(corner);
    CHECK(s.value == doctest::Approx(-4.0));
    CHECK(s.gradient_norm() < 1e-15);
    CHECK(s.hessian(0, 0) == doctest::Approx(2.0));
    CHECK(s.hessian(0, 1) == 0.0);
    const std::vector<double> mid{pi / 2, pi / 2};
    s = symbol(mid);
    CHECK(std::abs(s.value) < 1e-15);
    CHECK(s.gradient[0] == doctest::Approx(-2.0));
    CHECK(std::abs(s.hessian_diagonal[1]) < 1e-15);
    CHECK(phi(mid) == doctest::Approx(s.value));
}

TEST_CASE("exceptional set") {
    CHECK(exceptional_set(1) == std::vector<double>{-2.0, 2.0});
    CHECK(exceptional_set(2) == std::vector<double>{-4.0, 0.0, 4.0});
    CHECK(exceptional_set(3) == std::vector<double>{-6.0, -2.0, 2.0, 6.0});
    CHECK(exceptional_set(4) == std::vector<double>{-8.0, -4.0, 0.0, 4.0, 8.0});
    CHECK(exceptional_set_contains(2.0, 1));
    CHECK_FALSE(exceptional_set_contains(1.0, 1));
    CHECK(exceptional_set_contains(4.0 + 1e-10, 2));
    CHECK_FALSE(exceptional_set_contains(4.0 + 1e-7, 2));
    CHECK(is_regular(3.0, 2));
    CHECK_FALSE(is_regular(0.0, 2));
    CHECK_FALSE(is_regular(5.0, 2));
    CHECK(is_regular(0.0, 3));
    CHECK(distance_to_exceptional_set(3.0, 2) == doctest::Approx(1.0));
    CHECK(distance_to_exceptional_set(1.2, 1) == doctest::Approx(0.8));
}

TEST_CASE("cube reduction") {
    const std::vector<double> k{3.5, -3.5, 7.0};
    for (double x : reduce_to_cube(k, 1.0)) CHECK((x >= -pi && x < pi));
    for (double x : reduce_to_cube(k, -1.0)) CHECK((x >= 0.0 && x < 2 * pi));
    for (double x : reduce_to_cube(k, 0.0)) CHECK((x >= -pi && x < pi));
    const std::vector<double> a{0.1, -pi + 1e-3}, b{0.1 + 2 * pi, pi - 1e-3};
    CHECK(torus_distance(a, b) == doctest::Approx(2e-3).epsilon(1e-6));
}

TEST_CASE("directions") {
    const Direction w({3.0, 4.0});
    CHECK(w[0] == doctest::Approx(0.6));
    CHECK((-w)[1] == doctest::Approx(-0.8));
    CHECK_THROWS_AS(Direction({0.0, 0.0}), Error);
    const Direction t = Direction::toward(LatticeSite{1, 1, 0});
    CHECK(t[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("curvature examples") {
    const std::vector<double> a{-pi / 3, 0.0};
    CHECK(total_curvature(a) == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(signature(a) == 1);
    const std::vector<double> flat{pi / 2, pi / 2};
    CHECK(std::abs(total_curvature(flat)) < 1e-15);
    CHECK_THROWS_AS(signature(flat), Error);
    const std::vector<double> saddle{-pi / 3, pi, 0.0};
    CHECK(total_curvature(saddle) == doctest::Approx(-4.0 / 3.0));
    CHECK(signature(saddle) == 0);
    const std::vector<double> crit{0.0, 0.0};
    CHECK_THROWS_AS(total_curvature(crit), Error);
    const auto pc = principal_curvatures(saddle);
    REQUIRE(pc.size() == 2);
    CHECK(pc[0] < 0.0);
    CHECK(pc[1] > 0.0);
}

TEST_CASE("closed-form curvature matches the projected Hessian") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-pi, pi);
    int tested = 0;
    for (int d : {2, 3, 4}) {
        for (int i = 0; i < 500; ++i) {
            std::vector<double> k(static_cast<size_t>(d));
            for (double& x : k) x = u(rng);
            if (symbol(k).gradient_norm() < 1e-2) continue;
            const double a = total_curvature(k), b = projected_curvature(k);
            CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
            ++tested;
        }
    }
    CHECK(tested > 1400);
}

TEST_CASE("stationary point examples") {
    auto r = stationary_points(Direction({1.0, 0.0}), 3.0);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].k[0] == doctest::Approx(-pi / 3));
    CHECK(std::abs(r.points[0].k[1]) < 1e-12);
    CHECK(r.points[0].mu == doctest::Approx(-pi / 3));
    CHECK(r.points[0].signature == 1);

    const double a = std::acos(0.75);
    r = stationary_points(Direction({1.0, 1.0}), 3.0);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].k[0] == doctest::Approx(-a));
    CHECK(r.points[0].k[1] == doctest::Approx(-a));
    CHECK(r.points[0].mu == doctest::Approx(-std::sqrt(2.0) * a));

    r = stationary_points(Direction({1.0, 0.0, 0.0}), 1.0);
    REQUIRE(r.points.size() == 2);
    bool seen_a = false, seen_b = false;
    for (const auto& p : r.points) {
        const std::vector<double> x{-pi / 3, 0.0, -pi}, y{-pi / 3, -pi, 0.0};
        seen_a = seen_a || torus_distance(p.k, x) < 1e-10;
        seen_b = seen_b || torus_distance(p.k, y) < 1e-10;
        CHECK(p.curvature == doctest::Approx(-4.0 / 3.0));
        CHECK(p.signature == 0);
    }
    CHECK(seen_a);
    CHECK(seen_b);

    r = stationary_points(Direction({1.0, 0.0, 0.0}), 5.0);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].signature == 2);
}

TEST_CASE("stationary point properties") {
    std::mt19937 rng(4);
    std::normal_distribution<double> n;
    for (int d : {2, 3}) {
        for (double lambda : {d == 2 ? 3.0 : 5.0, 1.0, -1.0, d == 2 ? -3.0 : -3.0}) {
            for (int t = 0; t < 200; ++t) {
                std::vector<double> v(static_cast<size_t>(d));
                for (double& x : v) x = n(rng);
                const Direction w(v);
                const auto r = stationary_points(w, lambda);
                CHECK(r.points.size() + r.singular_contacts.size() <= (d == 3 ? 4u : 8u));
                for (const auto& p : r.points) {
                    const auto s = symbol(p.k);
                    CHECK(std::abs(s.value - lambda) < 1e-10);
                    CHECK(std::abs(dot(s.gradient, w.components()) - s.gradient_norm()) < 1e-10);
                    CHECK(std::abs(p.signature) <= d - 1);
                    CHECK((p.signature - (d - 1)) % 2 == 0);
                    for (double x : p.k) CHECK((lambda < 0 ? (x >= 0 && x < 2 * pi) : (x >= -pi && x < pi)));
                }
                for (size_t i = 1; i < r.points.size(); ++i) CHECK(r.points[i - 1].mu <= r.points[i].mu);
            }
        }
    }
}

TEST_CASE("antipodal symmetry keeps mu") {
    // k -> -k maps the points of omega to those of -omega, so mu = k . omega is unchanged
    std::mt19937 rng(12);
    std::normal_distribution<double> n;
    for (int t = 0; t < 100; ++t) {
        const Direction w({n(rng), n(rng), n(rng)});
        const auto a = stationary_points(w, 1.0), b = stationary_points(-w, 1.0);
        REQUIRE(a.points.size() == b.points.size());
        for (size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].mu == doctest::Approx(b.points[i].mu).epsilon(1e-9));
            std::vector<double> neg(a.points[i].k);
            for (double& x : neg) x = -x;
            bool found = false;
            for (const auto& q : b.points) found = found || torus_distance(neg, q.k) < 1e-9;
            CHECK(found);
        }
    }
}

TEST_CASE("mu increases with the level") {
    const double h = 1e-5;
    for (const auto& [w, lambda] : std::vector<std::pair<Direction, double>>{
             {Direction({1.0, 0.0}), 3.0}, {Direction({1.0, 2.0}), 1.5}, {Direction({1.0, 0.3, 0.2}), 5.0}}) {
        const auto lo = stationary_points(w, lambda - h), hi = stationary_points(w, lambda + h);
        REQUIRE(lo.points.size() == hi.points.size());
        for (size_t i = 0; i < lo.points.size(); ++i) CHECK(hi.points[i].mu - lo.points[i].mu > 0.0);
    }
}

TEST_CASE("convexity and singular directions") {
    CHECK(convexity_scan(3.0, 2, 256).is_positive);
    CHECK(convexity_scan(5.0, 3, 64).min_curvature > 0.0);
    CHECK(convexity_scan(1.0, 3, 64).min_curvature < 0.0);
    CHECK_THROWS_AS(convexity_scan(7.0, 3, 64), Error);

    CHECK_FALSE(singular_direction_check(Direction({1.0, 0.0}), 3.0).is_singular);
    CHECK_FALSE(singular_direction_check(Direction({0.3, -0.7}), 3.0).is_singular);
    CHECK_FALSE(singular_direction_check(Direction({1.0, 0.0}), 1.0).is_singular);
    CHECK_FALSE(find_singular_direction(3.0, 2, 128).has_value());

    const auto w = find_singular_direction(1.0, 3, 90);
    REQUIRE(w.has_value());
    const auto chk = singular_direction_check(*w, 1.0);
    CHECK(chk.min_abs_curvature < 1e-6);
}

#include "latrad/reduced_green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "latrad/dispersion.hpp"
#include "latrad/quadrature.hpp"

namespace latrad::reduced {

cplx green_1d(int n, cplx z) {
    const cplx s = std::sqrt(z * z - 4.0);
    cplx w = 0.5 * (z - s);
    if (std::abs(w) > 1.0) w = 0.5 * (z + s);
    return std::pow(w, std::abs(n)) / (w - 1.0 / w);
}

namespace {

cplx green_rec(const std::vector<int>& x, int axis, cplx eta, double abs_tol, double rel_tol) {
    const int rest = static_cast<int>(x.size()) - axis;
    if (rest == 1) return green_1d(x[static_cast<size_t>(axis)], eta);

    const double pi = std::numbers::pi;
    std::vector<double> points{0.0, pi};
    for (double c : exceptional_set(rest - 1)) {
        const double ck = 0.5 * (eta.real() - c);
        if (std::abs(ck) < 1.0) points.push_back(std::acos(ck));
    }
    std::sort(points.begin(), points.end());
    const int xa = x[static_cast<size_t>(axis)];
    auto integrand = [&](double k) {
        return std::cos(k * xa) * green_rec(x, axis + 1, eta - 2.0 * std::cos(k), 0.1 * abs_tol, rel_tol);
    };
    const AdaptiveResult r = integrate_adaptive(integrand, points, pi * abs_tol, rel_tol);
    return r.value / pi;
}

} // namespace

cplx green(std::span<const int> x, cplx eta, double abs_tol, double rel_tol) {
    const int d = static_cast<int>(x.size());
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    if (eta.imag() == 0.0 && std::abs(eta.real()) <= 2.0 * d)
        throw Error(ErrorCode::on_spectrum, "eta lies on the spectrum [-2d, 2d]");
    // G is even in each coordinate and symmetric under permutations; the
    // largest |x_j| goes to the closed-form slot.
    std::vector<int> ax(x.begin(), x.end());
    for (int& v : ax) v = std::abs(v);
    std::sort(ax.begin(), ax.end());
    return green_rec(ax, 0, eta, abs_tol, rel_tol);
}

} // namespace latrad::reduced

#include "latrad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latrad/error.hpp"

namespace latrad {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "Gauss rule needs at least one node");
    GaussRule rule;
    rule.nodes.assign(static_cast<size_t>(n), 0.0);
    rule.weights.assign(static_cast<size_t>(n), 0.0);
    if (n == 1) {
        rule.weights[0] = 2.0;
        return rule;
    }
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<size_t>(i)] = -x;
        rule.nodes[static_cast<size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<size_t>(i)] = w;
        rule.weights[static_cast<size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) {
        double p = 0.0, dp = 1.0;
        legendre(n, 0.0, p, dp);
        rule.weights[static_cast<size_t>(n / 2)] = 2.0 / (dp * dp);
    }
    return rule;
}

double smooth_step(double x) noexcept {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double smooth_cutoff(double t, double delta) noexcept {
    const double h = 0.5 * delta;
    return 1.0 - smooth_step((std::abs(t) - h) / h);
}

namespace {

// Kronrod 15-point nodes (positive half) and weights; Gauss 7-point weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    cplx value;
    double error;
    int depth;
};

Segment gk15(const std::function<cplx(double)>& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx kron = fc * kWgk[7];
    cplx gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const cplx s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h), depth};
}

} // namespace

AdaptiveResult integrate_adaptive(const std::function<cplx(double)>& f, std::span<const double> points,
                                  double abs_tol, double rel_tol, int max_depth) {
    if (points.size() < 2) throw Error(ErrorCode::invalid_argument, "integration needs two endpoints");
    std::vector<Segment> segs;
    AdaptiveResult out;
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        segs.push_back(gk15(f, points[i], points[i + 1], 0));
        out.evaluations += 15;
    }
    auto cmp = [](const Segment& x, const Segment& y) { return x.error < y.error; };
    std::make_heap(segs.begin(), segs.end(), cmp);
    const int max_segments = 20000;
    cplx total{};
    double err = 0.0;
    for (const auto& sg : segs) {
        total += sg.value;
        err += sg.error;
    }
    int since_refresh = 0;
    while (!segs.empty()) {
        if (++since_refresh == 64) {
            since_refresh = 0;
            total = cplx{};
            err = 0.0;
            for (const auto& sg : segs) {
                total += sg.value;
                err += sg.error;
            }
        }
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
        if (static_cast<int>(segs.size()) >= max_segments) break;
        std::pop_heap(segs.begin(), segs.end(), cmp);
        const Segment worst = segs.back();
        if (worst.error == 0.0) {
            std::push_heap(segs.begin(), segs.end(), cmp);
            break;
        }
        if (worst.depth >= max_depth) {
            // cannot refine further; park it with zero priority
            segs.back().error = 0.0;
            out.error += worst.error;
            err -= worst.error;
            std::push_heap(segs.begin(), segs.end(), cmp);
            continue;
        }
        segs.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gk15(f, worst.a, mid, worst.depth + 1);
        const Segment right = gk15(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        segs.push_back(left);
        std::push_heap(segs.begin(), segs.end(), cmp);
        segs.push_back(right);
        std::push_heap(segs.begin(), segs.end(), cmp);
        out.evaluations += 30;
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    std::vector<cplx> vals;
    vals.reserve(segs.size());
    for (const auto& s : segs) {
        vals.push_back(s.value);
        out.error += s.error;
    }
    // pairwise in interval order
    while (vals.size() > 1) {
        std::vector<cplx> next;
        for (size_t i = 0; i < vals.size(); i += 2)
            next.push_back(i + 1 < vals.size() ? vals[i] + vals[i + 1] : vals[i]);
        vals.swap(next);
    }
    out.value = vals.empty() ? cplx{} : vals[0];
    return out;
}

AdaptiveResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                  double rel_tol, int max_depth) {
    const double pts[2] = {a, b};
    return integrate_adaptive(f, std::span<const double>(pts, 2), abs_tol, rel_tol, max_depth);
}

cplx neville_at_zero(std::span<const double> x, std::span<const cplx> y) {
    const size_t n = x.size();
    if (n == 0 || y.size() != n) throw Error(ErrorCode::invalid_argument, "Neville needs matching nonempty data");
    std::vector<cplx> p(y.begin(), y.end());
    for (size_t m = 1; m < n; ++m)
        for (size_t i = 0; i + m < n; ++i)
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
    return p[0];
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw Error(ErrorCode::invalid_argument, "line fit needs two or more points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::fit_failed, "line fit with identical abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / double(n));
    return fit;
}

} // namespace latrad

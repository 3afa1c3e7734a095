#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace latrad {

using cplx = std::complex<double>;

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton on the Legendre recurrence).
GaussRule gauss_legendre(int n);

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x) noexcept;

/// Cutoff in t = phi(k) - lambda: 1 for |t| <= delta/2, 0 for |t| >= delta.
double smooth_cutoff(double t, double delta) noexcept;

struct AdaptiveResult {
    cplx value;
    double error = 0.0;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of a complex integrand on [a, b].
/// Intervals are bisected until the Kronrod-Gauss difference drops below
/// max(abs_tol, rel_tol |I|) in aggregate, or max_depth is reached.
AdaptiveResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                  double rel_tol, int max_depth = 40);

/// Same over [points.front(), points.back()], pre-split at the interior points
/// (ascending). Zero-length pieces are skipped.
AdaptiveResult integrate_adaptive(const std::function<cplx(double)>& f, std::span<const double> points,
                                  double abs_tol, double rel_tol, int max_depth = 40);

/// Value at x = 0 of the polynomial through (x_i, y_i) (Neville).
cplx neville_at_zero(std::span<const double> x, std::span<const cplx> y);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

/// Least squares y = slope x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

} // namespace latrad

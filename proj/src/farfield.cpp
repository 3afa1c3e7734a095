#include "latrad/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "latrad/quadrature.hpp"

namespace latrad {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> direction_of(const LatticeSite& xi) {
    const double n = xi.norm();
    if (n == 0.0) throw Error(ErrorCode::invalid_argument, "far field needs xi != 0");
    std::vector<double> w(static_cast<size_t>(xi.dim()));
    for (int j = 0; j < xi.dim(); ++j) w[static_cast<size_t>(j)] = xi[j] / n;
    return w;
}

} // namespace

cplx amplitude(const CompactLatticeFunction& f, const StationaryPoint& sp, Side side, double curvature_tol) {
    if (!(std::abs(sp.curvature) >= curvature_tol))
        throw Error(ErrorCode::vanishing_curvature, "total curvature vanishes at the stationary point");
    const double denom = std::sqrt(std::abs(sp.curvature)) * sp.gradient_norm;
    const double phase = (sp.signature + 2) * kPi / 4.0;
    if (side == Side::plus)
        return std::sqrt(2.0 * kPi) * fourier_transform(f, sp.k) * std::polar(1.0, phase) / denom;
    std::vector<double> mk(sp.k);
    for (double& x : mk) x = -x;
    return std::sqrt(2.0 * kPi) * fourier_transform(f, mk) * std::polar(1.0, -phase) / denom;
}

FarFieldExpansion farfield_expansion(const CompactLatticeFunction& f, const Direction& omega, double lambda, Side side,
                                     const StationaryOptions& opts) {
    if (omega.dim() != f.dim()) throw Error(ErrorCode::dimension_mismatch, "direction and function dimensions differ");
    const StationaryResult sr = stationary_points(omega, lambda, opts);
    if (sr.singular())
        throw Error(ErrorCode::vanishing_curvature, "omega is a singular direction: a stationary point has K = 0");
    FarFieldExpansion exp;
    exp.d = f.dim();
    exp.direction.assign(omega.components().begin(), omega.components().end());
    exp.lambda = lambda;
    exp.side = side;
    exp.warnings = sr.warnings;
    for (const auto& sp : sr.points) exp.terms.push_back({sp, amplitude(f, sp, side, opts.curvature_tol)});
    return exp;
}

cplx asymptotic_eval(const FarFieldExpansion& exp, const LatticeSite& xi, double angle_tol) {
    if (xi.dim() != exp.d) throw Error(ErrorCode::dimension_mismatch, "site dimension differs from the expansion's");
    const auto w = direction_of(xi);
    double dot = 0.0;
    for (size_t j = 0; j < w.size(); ++j) dot += w[j] * exp.direction[j];
    const double angle = std::acos(std::clamp(dot, -1.0, 1.0));
    if (angle > angle_tol)
        throw Error(ErrorCode::direction_outside_domain, "xi / |xi| is not the expansion direction");
    const double r = xi.norm();
    const double sgn = side_sign(exp.side);
    std::vector<cplx> terms;
    for (const auto& t : exp.terms) terms.push_back(std::polar(1.0, sgn * t.point.mu * r) * t.amplitude);
    cplx s = 0.0;
    for (const auto& v : terms) s += v;
    return s / std::pow(r, 0.5 * (exp.d - 1));
}

cplx asymptotic_at(const CompactLatticeFunction& f, const LatticeSite& xi, double lambda, Side side) {
    const FarFieldExpansion exp = farfield_expansion(f, Direction(direction_of(xi)), lambda, side);
    return asymptotic_eval(exp, xi);
}

std::vector<cplx> radiation_residual(const SiteFunction& psi, const StationaryPoint& sp, Side side,
                                     const LatticeSite& xi) {
    const int d = xi.dim();
    if (static_cast<int>(sp.k.size()) != d) throw Error(ErrorCode::dimension_mismatch, "stationary point dimension");
    const double sgn = side_sign(side);
    const cplx here = psi(xi);
    std::vector<cplx> out(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
        out[static_cast<size_t>(j)] =
            psi(xi + LatticeSite::unit(d, j)) - std::polar(1.0, sgn * sp.k[static_cast<size_t>(j)]) * here;
    return out;
}

std::vector<cplx> radiation_residual(const SiteFunction& psi, const FarFieldExpansion& exp, const LatticeSite& xi) {
    if (exp.terms.size() != 1)
        throw Error(ErrorCode::multi_wave_undecomposed,
                    std::to_string(exp.terms.size()) + " waves in this direction; pass psi split per wave");
    return radiation_residual(psi, exp.terms.front().point, exp.side, xi);
}

std::vector<cplx> radiation_residual(std::span<const SiteFunction> components, const FarFieldExpansion& exp,
                                     const LatticeSite& xi) {
    if (components.size() != exp.terms.size())
        throw Error(ErrorCode::invalid_argument, "one component per stationary point is required");
    std::vector<cplx> total(static_cast<size_t>(xi.dim()));
    for (size_t s = 0; s < components.size(); ++s) {
        const auto r = radiation_residual(components[s], exp.terms[s].point, exp.side, xi);
        for (size_t j = 0; j < r.size(); ++j) total[j] += r[j];
    }
    return total;
}

LatticeSite ray_site(const Direction& omega, double r) {
    std::vector<int> c(static_cast<size_t>(omega.dim()));
    for (int j = 0; j < omega.dim(); ++j) c[static_cast<size_t>(j)] = static_cast<int>(std::lround(r * omega[j]));
    return LatticeSite(std::move(c));
}

DecayFit decay_fit(std::span<const double> r, std::span<const double> magnitude) {
    if (r.size() != magnitude.size() || r.size() < 4)
        throw Error(ErrorCode::invalid_argument, "decay fit needs at least 4 radii");
    for (size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw Error(ErrorCode::invalid_argument, "radii must increase");
    if (!(r.front() > 0.0) || r.back() < 4.0 * r.front())
        throw Error(ErrorCode::invalid_argument, "radii must span a factor of at least 4");
    DecayFit fit;
    std::vector<double> x, y;
    for (size_t i = 0; i < r.size(); ++i) {
        if (magnitude[i] == 0.0) {
            ++fit.skipped;
            continue;
        }
        x.push_back(std::log(r[i]));
        y.push_back(std::log(magnitude[i]));
        fit.radii.push_back(r[i]);
    }
    if (x.empty()) {
        fit.slope = -std::numeric_limits<double>::infinity();
        return fit;
    }
    if (x.size() < 2) throw Error(ErrorCode::fit_failed, "too few nonzero samples for a decay fit");
    const LineFit lf = fit_line(x, y);
    fit.slope = lf.slope;
    fit.residual = lf.rms_residual;
    return fit;
}

DecayFit farfield_decay_fit(const SiteFunction& psi, const Direction& omega, std::span<const double> radii) {
    std::vector<double> r, m;
    for (double rr : radii) {
        const LatticeSite xi = ray_site(omega, rr);
        r.push_back(xi.norm());
        m.push_back(std::abs(psi(xi)));
    }
    return decay_fit(r, m);
}

double local_wavenumber(const SiteFunction& psi, const LatticeSite& xi, int j) {
    const cplx a = psi(xi);
    const cplx b = psi(xi + LatticeSite::unit(xi.dim(), j));
    if (a == 0.0 || b == 0.0) throw Error(ErrorCode::fit_failed, "psi vanishes; no local wavenumber");
    return std::arg(b / a);
}

ExponentialFit fit_exponentials(std::span<const cplx> y, int order) {
    const int n = static_cast<int>(y.size());
    if (order < 1 || n < 3 * order) throw Error(ErrorCode::invalid_argument, "need at least 3 samples per wave");
    const int l = n / 2;
    const int rows = n - l;
    Eigen::MatrixXcd h(rows, l + 1);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j <= l; ++j) h(i, j) = y[static_cast<size_t>(i + j)];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinV);
    const Eigen::MatrixXcd v = svd.matrixV().leftCols(order);
    const Eigen::MatrixXcd v1 = v.topRows(l);
    const Eigen::MatrixXcd v2 = v.bottomRows(l);
    const Eigen::MatrixXcd pencil = v1.completeOrthogonalDecomposition().pseudoInverse() * v2;
    // V spans the conjugated Vandermonde columns, so the pencil carries conj(z)
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(pencil);
    ExponentialFit fit;
    for (int s = 0; s < order; ++s) fit.poles.push_back(std::conj(es.eigenvalues()(s)));

    Eigen::MatrixXcd vand(n, order);
    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = y[static_cast<size_t>(i)];
        for (int s = 0; s < order; ++s) vand(i, s) = std::pow(fit.poles[static_cast<size_t>(s)], i);
    }
    const Eigen::VectorXcd c = vand.colPivHouseholderQr().solve(rhs);
    for (int s = 0; s < order; ++s) fit.coefficients.push_back(c(s));
    fit.residual = (vand * c - rhs).norm() / std::max(rhs.norm(), 1e-300);
    return fit;
}

WaveFit multi_wave_fit(const SiteFunction& psi, const LatticeSite& step, int first, int count, int order) {
    const int d = step.dim();
    const double h = step.norm();
    if (h == 0.0) throw Error(ErrorCode::invalid_argument, "step must be nonzero");
    if (first < 1) throw Error(ErrorCode::invalid_argument, "samples start at n >= 1");
    std::vector<cplx> y;
    for (int i = 0; i < count; ++i) {
        const int n = first + i;
        std::vector<int> c(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) c[static_cast<size_t>(j)] = n * step[j];
        y.push_back(psi(LatticeSite(std::move(c))) * std::pow(n * h, 0.5 * (d - 1)));
    }
    const ExponentialFit ef = fit_exponentials(y, order);
    WaveFit wf;
    wf.step_length = h;
    wf.residual = ef.residual;
    std::vector<std::pair<double, cplx>> waves;
    for (size_t s = 0; s < ef.poles.size(); ++s) {
        const double mu = std::arg(ef.poles[s]) / h;
        // coefficient of z^n with n = first + i; amplitude at the sample n itself
        waves.emplace_back(mu, ef.coefficients[s] * std::pow(ef.poles[s], -first));
    }
    std::sort(waves.begin(), waves.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [mu, a] : waves) {
        wf.mu.push_back(mu);
        wf.amplitudes.push_back(a);
    }
    return wf;
}

double wavenumber_distance(double a, double b, double step_length) {
    const double period = 2.0 * kPi / step_length;
    double x = std::fmod(a - b, period);
    if (x < 0) x += period;
    return std::min(x, period - x);
}

std::vector<ComparisonRow> compare_far_field(const CompactLatticeFunction& f, double lambda, Side side,
                                             std::span<const LatticeSite> sites, const QuadratureConfig& cfg) {
    const auto computed = lap_apply(f, BoundaryValue::limit(lambda, side), sites, cfg);
    std::vector<ComparisonRow> rows;
    const int d = f.dim();
    for (size_t i = 0; i < sites.size(); ++i) {
        ComparisonRow r;
        r.radius = sites[i].norm();
        r.computed = computed[i].value;
        r.predicted = asymptotic_at(f, sites[i], lambda, side);
        r.scaled_residual = std::pow(r.radius, 0.5 * (d + 1)) * std::abs(r.computed - r.predicted);
        rows.push_back(r);
    }
    return rows;
}

void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows) {
    os << "radius,re_computed,im_computed,re_predicted,im_predicted,scaled_residual\n";
    os << std::setprecision(12);
    for (const auto& r : rows)
        os << r.radius << ',' << r.computed.real() << ',' << r.computed.imag() << ',' << r.predicted.real() << ','
           << r.predicted.imag() << ',' << r.scaled_residual << '\n';
}

} // namespace latrad

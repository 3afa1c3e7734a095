#include "latrad/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

#include "latrad/kernels.hpp"
#include "latrad/quadrature.hpp"
#include "latrad/reduced_green.hpp"
#include "latrad/surface_mesh.hpp"

namespace latrad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int env_torus_order() {
    const char* s = std::getenv("LATRAD_TORUS_ORDER");
    if (!s || !*s) return 0;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 16 || v % 2 != 0)
        throw Error(ErrorCode::invalid_argument, "LATRAD_TORUS_ORDER must be an even integer >= 16");
    return static_cast<int>(v);
}

int round_up_even(int n) { return n + (n & 1); }

void check_sites(int d, std::span<const LatticeSite> sites) {
    for (const auto& s : sites)
        if (s.dim() != d) throw Error(ErrorCode::dimension_mismatch, "site dimension differs from the function's");
}

int reach_of(const CompactLatticeFunction& f, std::span<const LatticeSite> sites) {
    int m = 0;
    for (const auto& s : sites) m = std::max(m, s.max_norm());
    return m + f.support_radius();
}

std::vector<LatticeSite> one(const LatticeSite& s) { return {s}; }

// Trapezoidal torus sums of g(k) e^{ik.xi} at orders n and n/2 from one tabulation.
struct TorusPair {
    std::vector<cplx> full, half;
};

template <class G>
TorusPair torus_pair(int d, int n, std::span<const LatticeSite> sites, G&& g) {
    const kernels::TorusGrid grid{d, n};
    const std::vector<cplx> vals = kernels::tabulate(grid, g);
    const kernels::TorusGrid hgrid{d, n / 2};
    std::vector<cplx> hv(static_cast<size_t>(hgrid.size()));
    for (long long idx = 0; idx < hgrid.size(); ++idx) {
        long long rem = idx, full = 0, stride = 1;
        for (int j = d - 1; j >= 0; --j) {
            full += 2 * (rem % hgrid.n) * stride;
            rem /= hgrid.n;
            stride *= n;
        }
        hv[static_cast<size_t>(idx)] = vals[static_cast<size_t>(full)];
    }
    TorusPair out{kernels::torus_phase_sum(grid, vals, sites), kernels::torus_phase_sum(hgrid, hv, sites)};
    const double scale = std::pow(kTwoPi, -0.5 * d);
    const double wf = std::pow(kTwoPi / n, d) * scale;
    const double wh = std::pow(kTwoPi / (n / 2), d) * scale;
    for (auto& v : out.full) v *= wf;
    for (auto& v : out.half) v *= wh;
    return out;
}

struct SurfaceSums {
    std::vector<cplx> fine, coarse;
};

SurfaceSums phi_sums(const CompactLatticeFunction& f, std::span<const LatticeSite> sites, double rho, double lambda,
                     const ResolvedQuadrature& q) {
    const int d = f.dim();
    SurfaceSums out{std::vector<cplx>(sites.size()), std::vector<cplx>(sites.size())};
    const double chi = smooth_cutoff(rho - lambda, q.delta);
    if (chi == 0.0) return out;
    const SurfaceMesh mesh = surface_mesh(rho, d, q.surface_resolution, q.pou_exponent);
    const double pref = std::pow(kTwoPi, 1.0 - 0.5 * d) * chi;
    kernels::PhaseNodes coarse{d, {}, {}}, rest{d, {}, {}};
    for (size_t i = 0; i < mesh.size(); ++i) {
        const auto k = mesh.point(i);
        auto& dst = mesh.coarse[i] ? coarse : rest;
        dst.k.insert(dst.k.end(), k.begin(), k.end());
        dst.weight.push_back(pref * mesh.weight[i] * fourier_transform(f, k));
    }
    const auto sc = kernels::node_phase_sum(coarse, sites);
    const auto sr = kernels::node_phase_sum(rest, sites);
    const double up = std::pow(2.0, d - 1);
    for (size_t s = 0; s < sites.size(); ++s) {
        out.fine[s] = sc[s] + sr[s];
        out.coarse[s] = up * sc[s];
    }
    return out;
}

} // namespace

// -------------------------------------------------------------- BoundaryValue

BoundaryValue BoundaryValue::limit(double lambda, Side side) {
    if (!std::isfinite(lambda)) throw Error(ErrorCode::invalid_argument, "lambda must be finite");
    BoundaryValue b;
    b.lambda_ = lambda;
    b.side_ = side;
    return b;
}

BoundaryValue BoundaryValue::complex(cplx eta) {
    if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag()))
        throw Error(ErrorCode::invalid_argument, "eta must be finite");
    BoundaryValue b;
    b.lambda_ = eta.real();
    b.side_ = eta.imag() >= 0 ? Side::plus : Side::minus;
    b.eta_ = eta;
    return b;
}

BoundaryValue BoundaryValue::conjugate() const {
    if (eta_) return complex(std::conj(*eta_));
    return limit(lambda_, side_ == Side::plus ? Side::minus : Side::plus);
}

// ------------------------------------------------------------------- configs

ResolvedQuadrature resolve(const QuadratureConfig& cfg, int d, double lambda, int reach, bool needs_delta) {
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    if (cfg.chi_profile != "smooth")
        throw Error(ErrorCode::invalid_argument, "unknown chi profile '" + cfg.chi_profile + "'");
    ResolvedQuadrature r;
    r.d = d;
    r.lambda = lambda;
    r.pou_exponent = cfg.pou_exponent;

    int n = cfg.torus_order;
    if (n == 0) n = env_torus_order();
    if (n == 0) n = d == 1 ? 4096 : (d == 2 ? 256 : 64);
    if (n < 16 || n % 2 != 0) throw Error(ErrorCode::invalid_argument, "torus_order must be even and >= 16");
    int m = cfg.surface_resolution;
    if (m == 0) m = d <= 2 ? 512 : 128;
    if (m < 4 || m % 2 != 0) throw Error(ErrorCode::invalid_argument, "surface_resolution must be even and >= 4");
    if (cfg.auto_order) {
        const int floor = round_up_even(4 * reach + 32);
        n = std::max(n, floor);
        m = std::max(m, floor);
    }
    r.torus_order = n;
    r.surface_resolution = m;
    if (cfg.rho_order < 4 || cfg.rho_order % 2 != 0)
        throw Error(ErrorCode::invalid_argument, "rho_order must be even and >= 4");
    r.rho_order = cfg.rho_order;
    if (cfg.pou_exponent < 1 || cfg.pou_exponent % 2 == 0)
        throw Error(ErrorCode::invalid_argument, "pou_exponent must be odd and positive");

    if (needs_delta) {
        const double dist = distance_to_exceptional_set(lambda, d);
        double delta = cfg.delta;
        if (delta == 0.0) {
            if (!(cfg.delta_fraction > 0.0 && cfg.delta_fraction < 1.0))
                throw Error(ErrorCode::invalid_argument, "delta_fraction must lie in (0, 1)");
            delta = cfg.delta_fraction * dist;
        }
        if (!(delta > 0.0)) throw Error(ErrorCode::invalid_argument, "delta must be positive");
        if (delta >= dist)
            throw Error(ErrorCode::delta_too_large, "delta = " + std::to_string(delta) +
                                                        " is not below dist(lambda, S_0) = " + std::to_string(dist));
        r.delta = delta;
    }
    return r;
}

// ---------------------------------------------------------------- off spectrum

std::vector<ResolventValue> resolvent_offspectrum(const CompactLatticeFunction& f, cplx eta,
                                                  std::span<const LatticeSite> sites, const QuadratureConfig& cfg) {
    const int d = f.dim();
    check_sites(d, sites);
    if (eta.imag() == 0.0 && std::abs(eta.real()) <= 2.0 * d)
        throw Error(ErrorCode::on_spectrum, "eta = " + std::to_string(eta.real()) + " lies on the spectrum [-2d, 2d]");
    const ResolvedQuadrature q = resolve(cfg, d, eta.real(), reach_of(f, sites), false);
    auto g = [&](std::span<const double> k) { return fourier_transform(f, k) / (phi(k) - eta); };
    const TorusPair tp = torus_pair(d, q.torus_order, sites, g);

    std::vector<ResolventValue> out(sites.size());
    for (size_t s = 0; s < sites.size(); ++s) {
        out[s].site = sites[s];
        out[s].value = tp.full[s];
        out[s].error_estimate = std::abs(tp.full[s] - tp.half[s]);
    }
    if (cfg.check_doubling) {
        const TorusPair tp2 = torus_pair(d, 2 * q.torus_order, sites, g);
        for (size_t s = 0; s < sites.size(); ++s) {
            const double change = std::abs(tp2.full[s] - out[s].value);
            if (change > 10.0 * out[s].error_estimate + 1e-14 * (1.0 + std::abs(out[s].value)))
                out[s].converged = false;
        }
    }
    return out;
}

ResolventValue resolvent_offspectrum(const CompactLatticeFunction& f, cplx eta, const LatticeSite& xi,
                                     const QuadratureConfig& cfg) {
    const auto s = one(xi);
    return resolvent_offspectrum(f, eta, s, cfg).front();
}

// ------------------------------------------------------------ surface integral

std::vector<cplx> surface_integral_phi(const CompactLatticeFunction& f, std::span<const LatticeSite> sites,
                                       double rho, double lambda, const QuadratureConfig& cfg) {
    const int d = f.dim();
    check_sites(d, sites);
    if (!is_regular(rho, d))
        throw Error(ErrorCode::in_exceptional_set, "rho must be a regular point of the spectrum");
    const ResolvedQuadrature q = resolve(cfg, d, lambda, reach_of(f, sites), true);
    if (std::abs(rho - lambda) > q.delta) throw Error(ErrorCode::invalid_argument, "|rho - lambda| exceeds delta");
    return phi_sums(f, sites, rho, lambda, q).fine;
}

cplx surface_integral_phi(const CompactLatticeFunction& f, const LatticeSite& xi, double rho, double lambda,
                          const QuadratureConfig& cfg) {
    const auto s = one(xi);
    return surface_integral_phi(f, s, rho, lambda, cfg).front();
}

// ------------------------------------------------------------------- lap_apply

std::vector<ResolventValue> lap_apply(const CompactLatticeFunction& f, const BoundaryValue& bv,
                                      std::span<const LatticeSite> sites, const QuadratureConfig& cfg) {
    const int d = f.dim();
    check_sites(d, sites);
    if (!bv.is_limit()) return resolvent_offspectrum(f, bv.point(), sites, cfg);
    const double lambda = bv.lambda();
    if (std::abs(lambda) > 2.0 * d) return resolvent_offspectrum(f, cplx(lambda, 0.0), sites, cfg);
    if (exceptional_set_contains(lambda, d))
        throw Error(ErrorCode::in_exceptional_set,
                    "lambda = " + std::to_string(lambda) + " lies in S_0; the resolvent has no pointwise boundary value");
    const ResolvedQuadrature q = resolve(cfg, d, lambda, reach_of(f, sites), true);
    const double delta = q.delta;
    const size_t ns = sites.size();

    // (i) nonsingular part, (1 - chi) vanishes where |phi - lambda| <= delta/2
    auto g = [&](std::span<const double> k) -> cplx {
        const double t = phi(k) - lambda;
        if (std::abs(t) <= 0.5 * delta) return 0.0;
        return (1.0 - smooth_cutoff(t, delta)) * fourier_transform(f, k) / t;
    };
    const TorusPair t1 = torus_pair(d, q.torus_order, sites, g);

    // (ii) principal value over |rho - lambda| < delta, (iii) surface term
    const SurfaceSums phi0 = phi_sums(f, sites, lambda, lambda, q);
    struct Pv {
        std::vector<cplx> fine, coarse;
    };
    auto pv_integral = [&](int order) {
        const GaussRule rule = gauss_legendre(order);
        Pv out{std::vector<cplx>(ns), std::vector<cplx>(ns)};
        const double pieces[3][2] = {{-delta, -0.5 * delta}, {-0.5 * delta, 0.5 * delta}, {0.5 * delta, delta}};
        for (int p = 0; p < 3; ++p) {
            const double a = pieces[p][0], b = pieces[p][1];
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = mid + half * rule.nodes[i];
                const double w = half * rule.weights[i] / t;
                const SurfaceSums ph = phi_sums(f, sites, lambda + t, lambda, q);
                for (size_t s = 0; s < ns; ++s) {
                    if (p == 1) {
                        out.fine[s] += w * (ph.fine[s] - phi0.fine[s]);
                        out.coarse[s] += w * (ph.coarse[s] - phi0.coarse[s]);
                    } else {
                        out.fine[s] += w * ph.fine[s];
                        out.coarse[s] += w * ph.coarse[s];
                    }
                }
            }
        }
        return out;
    };
    const Pv pv = pv_integral(q.rho_order);
    const Pv pv_half = pv_integral(std::max(2, (q.rho_order / 2) & ~1));

    const double sgn = side_sign(bv.side());
    const cplx half_i(0.0, 0.5 * sgn);
    std::vector<ResolventValue> out(ns);
    for (size_t s = 0; s < ns; ++s) {
        out[s].site = sites[s];
        out[s].value = t1.full[s] + pv.fine[s] / kTwoPi + half_i * phi0.fine[s];
        const double e_torus = std::abs(t1.full[s] - t1.half[s]);
        const double e_surface = std::abs(pv.fine[s] - pv.coarse[s]) / kTwoPi + 0.5 * std::abs(phi0.fine[s] - phi0.coarse[s]);
        const double e_rho = std::abs(pv.fine[s] - pv_half.fine[s]) / kTwoPi;
        out[s].error_estimate = e_torus + e_surface + e_rho;
    }
    return out;
}

ResolventValue lap_apply(const CompactLatticeFunction& f, const BoundaryValue& bv, const LatticeSite& xi,
                         const QuadratureConfig& cfg) {
    const auto s = one(xi);
    return lap_apply(f, bv, s, cfg).front();
}

std::vector<ResolventValue> fundamental_solution(const BoundaryValue& bv, std::span<const LatticeSite> sites, int d,
                                                 const QuadratureConfig& cfg) {
    return lap_apply(CompactLatticeFunction::delta(LatticeSite::origin(d)), bv, sites, cfg);
}

ResolventValue fundamental_solution(const BoundaryValue& bv, const LatticeSite& xi, const QuadratureConfig& cfg) {
    const auto s = one(xi);
    return fundamental_solution(bv, s, xi.dim(), cfg).front();
}

// -------------------------------------------------------------- reduced path

std::vector<cplx> resolvent_reduced(const CompactLatticeFunction& f, cplx eta, std::span<const LatticeSite> sites,
                                    const QuadratureConfig& cfg) {
    const int d = f.dim();
    check_sites(d, sites);
    if (eta.imag() == 0.0 && std::abs(eta.real()) <= 2.0 * d)
        throw Error(ErrorCode::on_spectrum, "eta lies on the spectrum [-2d, 2d]");

    // G depends on the sorted |x_j| only
    auto key_of = [](const LatticeSite& x) {
        std::vector<int> k(x.coords().begin(), x.coords().end());
        for (int& v : k) v = std::abs(v);
        std::sort(k.begin(), k.end());
        return k;
    };
    std::map<std::vector<int>, size_t> index;
    std::vector<std::vector<int>> keys;
    for (const auto& xi : sites)
        for (const auto& [y, v] : f.entries()) {
            auto k = key_of(xi - y);
            if (index.emplace(k, keys.size()).second) keys.push_back(std::move(k));
        }
    std::vector<cplx> gval(keys.size());
    const long long nk = static_cast<long long>(keys.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < nk; ++i)
        gval[static_cast<size_t>(i)] = reduced::green(keys[static_cast<size_t>(i)], eta, cfg.oracle_abs_tol, cfg.oracle_rel_tol);

    std::vector<cplx> out(sites.size());
    for (size_t s = 0; s < sites.size(); ++s) {
        std::vector<cplx> terms;
        for (const auto& [y, v] : f.entries()) terms.push_back(v * gval[index.at(key_of(sites[s] - y))]);
        out[s] = kernels::pairwise_sum(std::span<const cplx>(terms));
    }
    return out;
}

EtaLadder eta_ladder(const CompactLatticeFunction& f, double lambda, Side side, std::span<const LatticeSite> sites,
                     const QuadratureConfig& cfg) {
    if (!(cfg.ladder_start > 0.0) || cfg.ladder_halvings < 1)
        throw Error(ErrorCode::invalid_argument, "ladder needs a positive start and at least one halving");
    EtaLadder l;
    const double sgn = side_sign(side);
    for (int i = 0; i <= cfg.ladder_halvings; ++i) {
        const double eps = cfg.ladder_start / std::pow(2.0, i);
        l.eps.push_back(eps);
        l.values.push_back(resolvent_reduced(f, cplx(lambda, sgn * eps), sites, cfg));
    }
    return l;
}

bool ladder_diverges(std::span<const cplx> v, double growth) {
    const size_t n = v.size();
    if (n < 3) return false;
    const double a = std::abs(v[n - 3]), b = std::abs(v[n - 2]), c = std::abs(v[n - 1]);
    const bool growing = b > a && c > b && c > (1.0 + growth) * a;
    const bool not_settling = std::abs(v[n - 1] - v[n - 2]) >= 0.75 * std::abs(v[n - 2] - v[n - 3]);
    return growing && not_settling;
}

std::vector<ResolventValue> eta_extrapolate(const CompactLatticeFunction& f, double lambda, Side side,
                                            std::span<const LatticeSite> sites, const QuadratureConfig& cfg) {
    const int deg = cfg.extrapolation_degree;
    if (deg < 0 || deg + 2 > cfg.ladder_halvings + 1)
        throw Error(ErrorCode::invalid_argument, "ladder too short for the extrapolation degree");
    const EtaLadder l = eta_ladder(f, lambda, side, sites, cfg);
    const size_t m = l.eps.size();
    const size_t w = static_cast<size_t>(deg) + 1;
    std::vector<ResolventValue> out(sites.size());
    for (size_t s = 0; s < sites.size(); ++s) {
        std::vector<cplx> col(m);
        for (size_t i = 0; i < m; ++i) col[i] = l.values[i][s];
        if (ladder_diverges(col, cfg.divergence_growth))
            throw Error(ErrorCode::divergent, "eta ladder diverges at lambda = " + std::to_string(lambda));
        auto window = [&](size_t start) {
            return neville_at_zero(std::span<const double>(l.eps).subspan(start, w),
                                   std::span<const cplx>(col).subspan(start, w));
        };
        const cplx last = window(m - w);
        const cplx prev = window(m - w - 1);
        out[s].site = sites[s];
        out[s].value = last;
        out[s].error_estimate = std::abs(last - prev);
    }
    return out;
}

ResolventValue eta_extrapolate(const CompactLatticeFunction& f, double lambda, Side side, const LatticeSite& xi,
                               const QuadratureConfig& cfg) {
    const auto s = one(xi);
    return eta_extrapolate(f, lambda, side, s, cfg).front();
}

// --------------------------------------------------------- log coefficient

LogCoefficient log_coefficient_estimate(const LatticeSite& xi, const QuadratureConfig& cfg) {
    if (xi.dim() != 2) throw Error(ErrorCode::invalid_argument, "the log coefficient is defined for d = 2");
    LogCoefficient lc;
    std::vector<double> x, yr, yi;
    for (int i = 0; i <= 8; ++i) {
        const double eps = 1e-4 * std::pow(10.0, -0.5 * i);
        const cplx v = reduced::green(xi.coords(), cplx(0.0, eps), cfg.oracle_abs_tol, cfg.oracle_rel_tol);
        lc.eps.push_back(eps);
        lc.values.push_back(v);
        x.push_back(std::log(eps));
        yr.push_back(v.real());
        yi.push_back(v.imag());
    }
    const LineFit fr = fit_line(x, yr);
    const LineFit fi = fit_line(x, yi);
    lc.slope = cplx(fr.slope, fi.slope);
    lc.rms_residual = std::hypot(fr.rms_residual, fi.rms_residual);
    double scale = 0.0;
    for (const auto& v : lc.values) scale = std::max(scale, std::abs(v));
    if (lc.rms_residual > 1e-3 * std::max(scale, 1e-3))
        throw Error(ErrorCode::fit_failed, "log-linear fit residual " + std::to_string(lc.rms_residual) + " too large");
    return lc;
}

// ------------------------------------------------------------------ Parseval

ParsevalReport patch_parseval(const CompactLatticeFunction& f, double rho, double lambda, int radius,
                              const QuadratureConfig& cfg) {
    const int d = f.dim();
    if (radius < 1) throw Error(ErrorCode::invalid_argument, "radius must be >= 1");
    const ResolvedQuadrature q = resolve(cfg, d, lambda, radius + f.support_radius(), true);
    const SurfaceMesh mesh = surface_mesh(rho, d, q.surface_resolution, q.pou_exponent);
    const double chi = smooth_cutoff(rho - lambda, q.delta);
    const double cell = std::pow(kTwoPi / q.surface_resolution, d - 1);
    const double pref = std::pow(kTwoPi, 1.0 - 0.5 * d);
    const auto sites = box_sites(d, radius);

    ParsevalReport rep;
    rep.radius = radius;
    for (size_t p = 0; p < mesh.patches.size(); ++p) {
        kernels::PhaseNodes nodes{d, {}, {}};
        double g2 = 0.0;
        for (size_t i = 0; i < mesh.size(); ++i) {
            if (mesh.patch_id[i] != static_cast<int>(p)) continue;
            const auto k = mesh.point(i);
            const cplx gk = chi * fourier_transform(f, k) * mesh.weight[i] / cell;
            nodes.k.insert(nodes.k.end(), k.begin(), k.end());
            nodes.weight.push_back(pref * gk * cell);
            g2 += std::norm(gk) * cell;
        }
        const auto F = kernels::node_phase_sum(nodes, sites);
        double lhs = 0.0;
        for (const auto& v : F) lhs += std::norm(v);
        const double rhs = kTwoPi * (2 * radius + 1) * g2;
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        if (rhs > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
    }
    return rep;
}

} // namespace latrad

#include "latrad/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "latrad/surface_mesh.hpp"

namespace latrad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_signed(double x) {
    double y = std::fmod(x + kPi, kTwoPi);
    if (y < 0) y += kTwoPi;
    return y - kPi;
}

} // namespace

// ------------------------------------------------------------------ Direction

Direction::Direction(std::vector<double> v) : c_(std::move(v)) {
    double s = 0.0;
    for (double x : c_) s += x * x;
    if (c_.empty() || s == 0.0 || !std::isfinite(s))
        throw Error(ErrorCode::invalid_argument, "direction must be a nonzero finite vector");
    const double n = std::sqrt(s);
    for (double& x : c_) x /= n;
}

Direction Direction::toward(const LatticeSite& xi) {
    std::vector<double> v(xi.coords().begin(), xi.coords().end());
    return Direction(std::move(v));
}

Direction Direction::operator-() const {
    std::vector<double> v(c_);
    for (double& x : v) x = -x;
    return Direction(std::move(v));
}

std::vector<double> reduce_to_cube(std::span<const double> k, double lambda) {
    std::vector<double> out(k.begin(), k.end());
    for (double& x : out) {
        if (lambda < 0.0) {
            x = std::fmod(x, kTwoPi);
            if (x < 0) x += kTwoPi;
            if (x >= kTwoPi) x -= kTwoPi;
        } else {
            x = wrap_signed(x);
        }
    }
    return out;
}

double torus_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t j = 0; j < a.size(); ++j) {
        const double dx = wrap_signed(a[j] - b[j]);
        s += dx * dx;
    }
    return std::sqrt(s);
}

// --------------------------------------------------------------------- symbol

double SymbolValue::gradient_norm() const {
    double s = 0.0;
    for (double g : gradient) s += g * g;
    return std::sqrt(s);
}

SymbolValue symbol(std::span<const double> k) {
    SymbolValue v;
    v.gradient.resize(k.size());
    v.hessian_diagonal.resize(k.size());
    for (size_t j = 0; j < k.size(); ++j) {
        const double c = std::cos(k[j]);
        v.value += 2.0 * c;
        v.gradient[j] = -2.0 * std::sin(k[j]);
        v.hessian_diagonal[j] = -2.0 * c;
    }
    return v;
}

double phi(std::span<const double> k) noexcept {
    double s = 0.0;
    for (double x : k) s += 2.0 * std::cos(x);
    return s;
}

// ------------------------------------------------------------- exceptional set

std::vector<double> exceptional_set(int d) {
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    std::vector<double> s;
    // +-4n (d even) or +-2(2n+1) (d odd), 2n <= d
    for (int n = 0; 2 * n <= d; ++n) {
        const double v = (d % 2 == 0) ? 4.0 * n : 2.0 * (2 * n + 1);
        if (v > 2.0 * d) continue;
        s.push_back(v);
        if (v != 0.0) s.push_back(-v);
    }
    std::sort(s.begin(), s.end());
    return s;
}

bool exceptional_set_contains(double lambda, int d, double tol) {
    for (double v : exceptional_set(d))
        if (std::abs(lambda - v) <= tol) return true;
    return false;
}

bool is_regular(double lambda, int d, double tol) {
    return std::abs(lambda) <= 2.0 * d && !exceptional_set_contains(lambda, d, tol);
}

double distance_to_exceptional_set(double lambda, int d) {
    double m = INFINITY;
    for (double v : exceptional_set(d)) m = std::min(m, std::abs(lambda - v));
    return m;
}

// ------------------------------------------------------------------ curvature

double total_curvature(std::span<const double> k) {
    const size_t d = k.size();
    double num = 0.0;
    double den = 0.0;
    for (size_t j = 0; j < d; ++j) {
        const double s = std::sin(k[j]);
        double prod = s * s;
        for (size_t m = 0; m < d; ++m)
            if (m != j) prod *= std::cos(k[m]);
        num += prod;
        den += s * s;
    }
    if (den < 1e-28) throw Error(ErrorCode::degenerate_point, "gradient of phi vanishes");
    return num / std::pow(den, 0.5 * (double(d) + 1.0));
}

namespace {

// Shape operator -P H P / |grad phi| restricted to the tangent plane.
Eigen::MatrixXd shape_operator(std::span<const double> k) {
    const int d = static_cast<int>(k.size());
    const SymbolValue s = symbol(k);
    const double gn = s.gradient_norm();
    if (gn < 1e-14) throw Error(ErrorCode::degenerate_point, "gradient of phi vanishes");
    if (d == 1) return Eigen::MatrixXd(0, 0);
    Eigen::VectorXd n(d);
    for (int j = 0; j < d; ++j) n(j) = s.gradient[static_cast<size_t>(j)] / gn;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(n);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd basis = q.rightCols(d - 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j) h(j, j) = s.hessian_diagonal[static_cast<size_t>(j)];
    return -(basis.transpose() * h * basis) / gn;
}

} // namespace

std::vector<double> principal_curvatures(std::span<const double> k) {
    const Eigen::MatrixXd sop = shape_operator(k);
    if (sop.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sop + sop.transpose()), Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<size_t>(sop.rows()));
    for (int i = 0; i < sop.rows(); ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return out;
}

double projected_curvature(std::span<const double> k) {
    double p = 1.0;
    for (double c : principal_curvatures(k)) p *= c;
    return p;
}

int signature(std::span<const double> k, double tol) {
    int sig = 0;
    for (double c : principal_curvatures(k)) {
        if (std::abs(c) < tol) throw Error(ErrorCode::degenerate_point, "principal curvature vanishes");
        sig += c > 0 ? 1 : -1;
    }
    return sig;
}

// ---------------------------------------------------------- stationary points

namespace {

struct PatternProblem {
    std::vector<int> axes;      // coordinates with omega_j != 0
    std::vector<double> w;      // omega_j on those axes
    std::vector<int> sign;      // branch of cos k_j
    double offset = 0.0;        // sum of cos over zero axes minus lambda/2
};

double pattern_value(const PatternProblem& p, double kappa) {
    double s = p.offset;
    for (size_t i = 0; i < p.w.size(); ++i) s += p.sign[i] * std::sqrt(std::max(0.0, 1.0 - kappa * kappa * p.w[i] * p.w[i]));
    return s;
}

double pattern_slope(const PatternProblem& p, double kappa) {
    double s = 0.0;
    for (size_t i = 0; i < p.w.size(); ++i) {
        const double r = std::sqrt(std::max(1e-300, 1.0 - kappa * kappa * p.w[i] * p.w[i]));
        s -= p.sign[i] * kappa * p.w[i] * p.w[i] / r;
    }
    return s;
}

template <class F>
double bisect(F&& f, double a, double b, double tol) {
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Newton on grad phi(k) = c omega, phi(k) = lambda.
void polish(std::vector<double>& k, double& c, const Direction& omega, double lambda) {
    const int d = static_cast<int>(k.size());
    for (int it = 0; it < 8; ++it) {
        Eigen::VectorXd r(d + 1);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d + 1, d + 1);
        double ph = 0.0;
        for (int j = 0; j < d; ++j) {
            const double sj = std::sin(k[static_cast<size_t>(j)]);
            const double cj = std::cos(k[static_cast<size_t>(j)]);
            r(j) = -2.0 * sj - c * omega[j];
            jac(j, j) = -2.0 * cj;
            jac(j, d) = -omega[j];
            jac(d, j) = -2.0 * sj;
            ph += 2.0 * cj;
        }
        r(d) = ph - lambda;
        if (r.norm() < 1e-15) return;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (lu.rcond() < 1e-10) return;
        const Eigen::VectorXd step = lu.solve(r);
        if (step.norm() > 1e-6) return;
        for (int j = 0; j < d; ++j) k[static_cast<size_t>(j)] -= step(j);
        c -= step(d);
    }
}

} // namespace

StationaryResult stationary_points(const Direction& omega, double lambda, const StationaryOptions& opts) {
    const int d = omega.dim();
    if (!is_regular(lambda, d))
        throw Error(ErrorCode::in_exceptional_set,
                    "lambda = " + std::to_string(lambda) + " is not a regular point of the spectrum");
    if (opts.cells < 2) throw Error(ErrorCode::invalid_argument, "need at least two scan cells");

    std::vector<int> nz, zero;
    double wmax = 0.0;
    for (int j = 0; j < d; ++j) {
        if (std::abs(omega[j]) > opts.zero_component_tol) {
            nz.push_back(j);
            wmax = std::max(wmax, std::abs(omega[j]));
        } else {
            zero.push_back(j);
        }
    }
    const double kappa_max = 1.0 / wmax;

    StationaryResult result;
    std::vector<StationaryPoint> found;

    const int nzc = static_cast<int>(nz.size());
    const int zc = static_cast<int>(zero.size());
    for (int zmask = 0; zmask < (1 << zc); ++zmask) {
        for (int smask = 0; smask < (1 << nzc); ++smask) {
            PatternProblem p;
            p.axes = nz;
            p.offset = -0.5 * lambda;
            for (int i = 0; i < zc; ++i) p.offset += ((zmask >> i) & 1) ? -1.0 : 1.0;
            for (int i = 0; i < nzc; ++i) {
                p.w.push_back(omega[nz[static_cast<size_t>(i)]]);
                p.sign.push_back(((smask >> i) & 1) ? -1 : 1);
            }
            auto h = [&](double kap) { return pattern_value(p, kap); };
            auto dh = [&](double kap) { return pattern_slope(p, kap); };

            std::vector<double> roots;
            std::vector<double> grid(static_cast<size_t>(opts.cells) + 1);
            std::vector<double> hv(grid.size());
            for (int i = 0; i <= opts.cells; ++i) {
                grid[static_cast<size_t>(i)] = kappa_max * i / opts.cells;
                hv[static_cast<size_t>(i)] = h(grid[static_cast<size_t>(i)]);
            }
            for (int i = 0; i < opts.cells; ++i) {
                const double a = grid[static_cast<size_t>(i)], b = grid[static_cast<size_t>(i) + 1];
                const double ha = hv[static_cast<size_t>(i)], hb = hv[static_cast<size_t>(i) + 1];
                if (hb == 0.0) {
                    roots.push_back(b);
                    continue;
                }
                if (ha == 0.0) continue;  // kappa = 0 is never a root; others were taken as hb
                if ((ha < 0) != (hb < 0)) {
                    roots.push_back(bisect(h, a, b, opts.bisection_tol));
                    continue;
                }
                // no sign change: look for an interior extremum touching or crossing zero
                const double da = dh(a), db = dh(std::min(b, kappa_max * (1.0 - 1e-15)));
                if ((da < 0) == (db < 0)) continue;
                const double e = bisect(dh, a, b, opts.bisection_tol);
                const double he = h(e);
                if (std::abs(he) <= opts.tangency_tol) {
                    roots.push_back(e);
                } else if ((he < 0) != (ha < 0)) {
                    roots.push_back(bisect(h, a, e, opts.bisection_tol));
                    roots.push_back(bisect(h, e, b, opts.bisection_tol));
                }
            }

            for (double kap : roots) {
                if (kap <= 0.0) continue;
                StationaryPoint sp;
                sp.kappa = kap;
                sp.k.assign(static_cast<size_t>(d), 0.0);
                sp.sign_pattern.assign(static_cast<size_t>(d), 0);
                for (int i = 0; i < zc; ++i)
                    sp.k[static_cast<size_t>(zero[static_cast<size_t>(i)])] = ((zmask >> i) & 1) ? kPi : 0.0;
                for (int i = 0; i < nzc; ++i) {
                    const int j = nz[static_cast<size_t>(i)];
                    const double x = std::clamp(kap * omega[j], -1.0, 1.0);
                    const int s = p.sign[static_cast<size_t>(i)];
                    sp.k[static_cast<size_t>(j)] = s > 0 ? -std::asin(x) : kPi + std::asin(x);
                    sp.sign_pattern[static_cast<size_t>(j)] = s;
                }
                double c = 2.0 * kap;
                if (opts.polish) polish(sp.k, c, omega, lambda);
                sp.k = reduce_to_cube(sp.k, lambda);
                const SymbolValue sv = symbol(sp.k);
                if (std::abs(sv.value - lambda) > 1e-8) continue;
                double dot = 0.0;
                for (int j = 0; j < d; ++j) dot += sv.gradient[static_cast<size_t>(j)] * omega[j];
                sp.gradient_norm = sv.gradient_norm();
                if (sp.gradient_norm <= 0.0 || dot < sp.gradient_norm * (1.0 - 1e-8)) continue;
                sp.kappa = 0.5 * sp.gradient_norm;
                found.push_back(std::move(sp));
            }
        }
    }

    // dedupe modulo 2 pi
    std::vector<StationaryPoint> unique;
    for (auto& sp : found) {
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const StationaryPoint& u) {
            return torus_distance(u.k, sp.k) < opts.dedup_tol;
        });
        if (!dup) unique.push_back(std::move(sp));
    }

    for (auto& sp : unique) {
        sp.mu = 0.0;
        for (int j = 0; j < d; ++j) sp.mu += sp.k[static_cast<size_t>(j)] * omega[j];
        sp.curvature = total_curvature(sp.k);
        const double ak = std::abs(sp.curvature);
        if (ak >= opts.curvature_tol) {
            if (ak < 10.0 * opts.curvature_tol)
                result.warnings.push_back("nearly degenerate stationary point, |K| = " + std::to_string(ak));
            try {
                sp.signature = signature(sp.k, 1e-12);
            } catch (const Error&) {
                sp.signature = 0;
                result.warnings.push_back("principal curvature too small to sign");
            }
        }
        if (opts.filter_curvature && ak < opts.curvature_tol)
            result.singular_contacts.push_back(std::move(sp));
        else
            result.points.push_back(std::move(sp));
    }
    auto by_mu = [](const StationaryPoint& a, const StationaryPoint& b) {
        if (a.mu != b.mu) return a.mu < b.mu;
        return a.k < b.k;
    };
    std::sort(result.points.begin(), result.points.end(), by_mu);
    std::sort(result.singular_contacts.begin(), result.singular_contacts.end(), by_mu);
    return result;
}

// ------------------------------------------------------------ surface scans

ConvexityReport convexity_scan(double lambda, int d, int resolution) {
    if (!is_regular(lambda, d))
        throw Error(ErrorCode::in_exceptional_set, "convexity scan needs a regular lambda");
    const SurfaceMesh mesh = surface_mesh(lambda, d, resolution);
    if (mesh.size() == 0) throw Error(ErrorCode::empty_surface, "mesh of Gamma(lambda) is empty");
    ConvexityReport rep;
    rep.min_curvature = INFINITY;
    rep.max_curvature = -INFINITY;
    for (size_t i = 0; i < mesh.size(); ++i) {
        const auto k = mesh.point(i);
        const double kv = total_curvature(k);
        if (kv < rep.min_curvature) {
            rep.min_curvature = kv;
            rep.argmin.assign(k.begin(), k.end());
        }
        rep.max_curvature = std::max(rep.max_curvature, kv);
    }
    rep.nodes = mesh.size();
    rep.is_positive = rep.min_curvature > 0.0;
    return rep;
}

SingularCheck singular_direction_check(const Direction& omega, double lambda, const StationaryOptions& opts) {
    StationaryOptions o = opts;
    o.filter_curvature = false;
    const StationaryResult r = stationary_points(omega, lambda, o);
    SingularCheck c;
    c.matched = r.points.size();
    c.min_abs_curvature = INFINITY;
    for (const auto& sp : r.points) c.min_abs_curvature = std::min(c.min_abs_curvature, std::abs(sp.curvature));
    c.is_singular = c.min_abs_curvature < opts.curvature_tol;
    return c;
}

std::optional<Direction> find_singular_direction(double lambda, int d, int resolution) {
    if (d < 2) return std::nullopt;
    if (!is_regular(lambda, d)) throw Error(ErrorCode::in_exceptional_set, "lambda must be regular");
    const int nb = d - 1;
    const int n = resolution;
    // graph over axis 0: k_0 = arccos(lambda/2 - sum_{m>0} cos k_m)
    auto lift = [&](const std::vector<double>& base, std::vector<double>& k) -> bool {
        double c = 0.5 * lambda;
        for (double x : base) c -= std::cos(x);
        if (std::abs(c) > 1.0) return false;
        k.assign(1, std::acos(c));
        k.insert(k.end(), base.begin(), base.end());
        // stay away from the edge of the base region where the graph degenerates
        return std::abs(std::sin(k[0])) > 1e-3;
    };
    long long total = 1;
    for (int i = 0; i < nb; ++i) total *= n;
    std::vector<double> base(static_cast<size_t>(nb)), nb_base(static_cast<size_t>(nb));
    std::vector<double> k, kn;
    for (long long idx = 0; idx < total; ++idx) {
        long long rem = idx;
        for (int i = nb - 1; i >= 0; --i) {
            base[static_cast<size_t>(i)] = -kPi + kTwoPi * double(rem % n) / n;
            rem /= n;
        }
        if (!lift(base, k)) continue;
        const double k0 = total_curvature(k);
        for (int axis = 0; axis < nb; ++axis) {
            nb_base = base;
            nb_base[static_cast<size_t>(axis)] += kTwoPi / n;
            if (!lift(nb_base, kn)) continue;
            const double k1 = total_curvature(kn);
            if ((k0 < 0) == (k1 < 0)) continue;
            // bisect along the base segment
            double a = 0.0, b = 1.0;
            std::vector<double> bt(base), kt;
            auto curv_at = [&](double t) {
                bt = base;
                bt[static_cast<size_t>(axis)] += t * kTwoPi / n;
                if (!lift(bt, kt)) return std::nan("");
                return total_curvature(kt);
            };
            for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
                const double m = 0.5 * (a + b);
                const double km = curv_at(m);
                if (std::isnan(km)) break;
                if ((km < 0) == (k0 < 0)) a = m;
                else b = m;
            }
            curv_at(0.5 * (a + b));
            const SymbolValue s = symbol(kt);
            return Direction(s.gradient);
        }
    }
    return std::nullopt;
}

} // namespace latrad

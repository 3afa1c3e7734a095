#include "latrad/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace latrad {

namespace {

bool uses_lap(int d, const BoundaryValue& bv) { return bv.is_limit() && std::abs(bv.lambda()) <= 2.0 * d; }

std::vector<ResolventValue> apply_resolvent(const CompactLatticeFunction& f, const BoundaryValue& bv,
                                            std::span<const LatticeSite> sites, const QuadratureConfig& cfg) {
    const int d = f.dim();
    if (uses_lap(d, bv) || d > 3) return lap_apply(f, bv, sites, cfg);
    const auto v = resolvent_reduced(f, bv.point(), sites, cfg);
    std::vector<ResolventValue> out(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) {
        out[i].site = sites[i];
        out[i].value = v[i];
        out[i].error_estimate = cfg.oracle_abs_tol + cfg.oracle_rel_tol * std::abs(v[i]);
    }
    return out;
}

// G at every displacement x - y, x in rows, y in cols.
Eigen::MatrixXcd green_block(int d, const BoundaryValue& bv, const std::vector<LatticeSite>& rows,
                             const std::vector<LatticeSite>& cols, const QuadratureConfig& cfg) {
    std::map<LatticeSite, size_t> index;
    std::vector<LatticeSite> disp;
    for (const auto& x : rows)
        for (const auto& y : cols) {
            LatticeSite dxy = x - y;
            if (index.emplace(dxy, disp.size()).second) disp.push_back(std::move(dxy));
        }
    const auto g = green_values(d, bv, disp, cfg);
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[index.at(rows[i] - cols[j])];
    return m;
}

} // namespace

std::vector<cplx> green_values(int d, const BoundaryValue& bv, std::span<const LatticeSite> displacements,
                               const QuadratureConfig& cfg) {
    if (displacements.empty()) return {};
    const auto delta = CompactLatticeFunction::delta(LatticeSite::origin(d));
    const auto r = apply_resolvent(delta, bv, displacements, cfg);
    std::vector<cplx> out(r.size());
    for (size_t i = 0; i < r.size(); ++i) out[i] = r[i].value;
    return out;
}

BirmanSchwingerSystem assemble(const CompactLatticeFunction& q, const BoundaryValue& bv, const QuadratureConfig& cfg) {
    BirmanSchwingerSystem sys;
    sys.bv = bv;
    sys.support_sites = q.support();
    const auto n = static_cast<Eigen::Index>(sys.support_sites.size());
    sys.matrix = Eigen::MatrixXcd::Identity(n, n);
    if (n == 0) return sys;
    const Eigen::MatrixXcd g = green_block(q.dim(), bv, sys.support_sites, sys.support_sites, cfg);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx qi = q(sys.support_sites[static_cast<size_t>(i)]);
        for (Eigen::Index j = 0; j < n; ++j) sys.matrix(i, j) += qi * g(i, j);
    }
    return sys;
}

ScatteringSolution solve_scattering(const CompactLatticeFunction& f, const CompactLatticeFunction& q,
                                    const BoundaryValue& bv, std::span<const LatticeSite> sites,
                                    const QuadratureConfig& cfg, double rcond_min) {
    if (f.dim() != q.dim()) throw Error(ErrorCode::dimension_mismatch, "f and q have different dimensions");
    const int d = f.dim();
    if (bv.is_limit() && std::abs(bv.lambda()) <= 2.0 * d && exceptional_set_contains(bv.lambda(), d))
        throw Error(ErrorCode::in_exceptional_set, "lambda lies in S_0");
    ScatteringSolution sol{CompactLatticeFunction(d), {}, 1.0};

    const std::vector<LatticeSite> qs = q.support();
    std::vector<LatticeSite> outside;
    for (const auto& [y, v] : f.entries())
        if (q(y) == 0.0) outside.push_back(y);

    CompactLatticeFunction::Map density;
    for (const auto& y : outside) density.emplace(y, f(y));
    if (!qs.empty()) {
        const BirmanSchwingerSystem sys = assemble(q, bv, cfg);
        const auto n = static_cast<Eigen::Index>(qs.size());
        Eigen::VectorXcd rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) rhs(i) = f(qs[static_cast<size_t>(i)]);
        if (!outside.empty()) {
            const Eigen::MatrixXcd g = green_block(d, bv, qs, outside, cfg);
            for (Eigen::Index i = 0; i < n; ++i) {
                cplx s = 0.0;
                for (size_t j = 0; j < outside.size(); ++j) s += g(i, static_cast<Eigen::Index>(j)) * f(outside[j]);
                rhs(i) -= q(qs[static_cast<size_t>(i)]) * s;
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.matrix);
        sol.rcond = lu.rcond();
        if (!(sol.rcond >= rcond_min))
            throw Error(ErrorCode::near_singular_system,
                        "I + T is near singular (rcond " + std::to_string(sol.rcond) + ")");
        const Eigen::VectorXcd x = lu.solve(rhs);
        for (Eigen::Index i = 0; i < n; ++i)
            if (x(i) != 0.0) density.emplace(qs[static_cast<size_t>(i)], x(i));
    }
    sol.density = CompactLatticeFunction(d, std::move(density));
    if (!sites.empty()) sol.values = apply_resolvent(sol.density, bv, sites, cfg);
    return sol;
}

ResolventValue solve_scattering(const CompactLatticeFunction& f, const CompactLatticeFunction& q,
                                const BoundaryValue& bv, const LatticeSite& xi, const QuadratureConfig& cfg) {
    const std::vector<LatticeSite> s{xi};
    return solve_scattering(f, q, bv, s, cfg).values.front();
}

// --------------------------------------------------------------- bound states

namespace {

Eigen::MatrixXd real_system(const CompactLatticeFunction& q, double lambda, const QuadratureConfig& cfg) {
    const int d = q.dim();
    if (std::abs(lambda) <= 2.0 * d)
        throw Error(ErrorCode::on_spectrum, "bound states are searched off [-2d, 2d]");
    return assemble(q, BoundaryValue::limit(lambda, Side::plus), cfg).matrix.real();
}

double det_of(const Eigen::MatrixXd& m) { return m.rows() == 0 ? 1.0 : m.partialPivLu().determinant(); }

int nullity(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    int k = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) < tol) ++k;
    return k;
}

double smallest_singular_value(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().minCoeff();
}

} // namespace

double bound_state_determinant(const CompactLatticeFunction& q, double lambda, const QuadratureConfig& cfg) {
    return det_of(real_system(q, lambda, cfg));
}

BoundStateReport bound_state_scan(const CompactLatticeFunction& q, const BoundStateScanOptions& opts,
                                  const QuadratureConfig& cfg) {
    if (!q.is_real()) throw Error(ErrorCode::invalid_argument, "potential must be real valued");
    if (opts.grid < 4) throw Error(ErrorCode::invalid_argument, "scan grid needs at least 4 points");
    const int d = q.dim();
    BoundStateReport rep;
    rep.n = static_cast<int>(q.support_size());
    if (rep.n == 0) return rep;
    const double window = opts.window > 0.0 ? opts.window : 2.0 * q.max_abs() + 2.0;
    const double edge = 2.0 * d;
    const double spacing = window / opts.grid;
    const double sv_tol = 1e-5;

    // offsets t > 0 from the band edge, ascending
    std::vector<double> t;
    for (int k = opts.edge_decades; k >= 1; --k) t.push_back(spacing * std::pow(10.0, -k));
    for (int i = 1; i <= opts.grid; ++i) t.push_back(spacing * i);

    for (int side = -1; side <= 1; side += 2) {
        auto lam = [&](double s) { return side * (edge + s); };
        auto det_at = [&](double s) { return bound_state_determinant(q, lam(s), cfg); };
        std::vector<double> dv(t.size());
        for (size_t i = 0; i < t.size(); ++i) dv[i] = det_at(t[i]);

        std::vector<BoundState> found;
        for (size_t i = 0; i + 1 < t.size(); ++i) {
            if (dv[i] == 0.0) {
                found.push_back({lam(t[i]), 1, ZeroKind::sign_change});
                continue;
            }
            if ((dv[i] < 0) == (dv[i + 1] < 0) || dv[i + 1] == 0.0) continue;
            double a = t[i], b = t[i + 1], fa = dv[i];
            while (b - a > opts.tolerance) {
                const double m = 0.5 * (a + b);
                const double fm = det_at(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm < 0) == (fa < 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            found.push_back({lam(0.5 * (a + b)), 1, ZeroKind::sign_change});
        }
        for (size_t i = 1; i + 1 < t.size(); ++i) {
            const double m0 = std::abs(dv[i - 1]), m1 = std::abs(dv[i]), m2 = std::abs(dv[i + 1]);
            if (!(m1 < m0 && m1 < m2)) continue;
            if ((dv[i - 1] < 0) != (dv[i] < 0) || (dv[i] < 0) != (dv[i + 1] < 0)) continue;
            // golden section on |det| over [t_{i-1}, t_{i+1}]
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = t[i - 1], b = t[i + 1];
            double c = b - g * (b - a), e = a + g * (b - a);
            double fc = std::abs(det_at(c)), fe = std::abs(det_at(e));
            while (b - a > opts.tolerance) {
                if (fc < fe) {
                    b = e;
                    e = c;
                    fe = fc;
                    c = b - g * (b - a);
                    fc = std::abs(det_at(c));
                } else {
                    a = c;
                    c = e;
                    fc = fe;
                    e = a + g * (b - a);
                    fe = std::abs(det_at(e));
                }
            }
            const double s = 0.5 * (a + b);
            if (smallest_singular_value(real_system(q, lam(s), cfg)) < sv_tol)
                found.push_back({lam(s), 2, ZeroKind::magnitude_minimum});
        }
        std::sort(found.begin(), found.end(), [](const BoundState& x, const BoundState& y) { return x.lambda < y.lambda; });
        for (auto& z : found) {
            const int null = nullity(real_system(q, z.lambda, cfg), sv_tol);
            if (null >= 1) z.multiplicity = null;
            if (z.kind == ZeroKind::sign_change && z.multiplicity % 2 == 0)
                rep.warnings.push_back("sign change at " + std::to_string(z.lambda) +
                                       " has even nullity; zeros may have merged");
        }
        for (size_t i = 1; i < found.size(); ++i)
            if (std::abs(found[i].lambda - found[i - 1].lambda) < spacing)
                rep.warnings.push_back("zeros near " + std::to_string(found[i].lambda) +
                                       " are closer than the scan spacing");
        auto& dst = side < 0 ? rep.below : rep.above;
        dst = std::move(found);
    }
    for (const auto& z : rep.below) rep.count_below += z.multiplicity;
    for (const auto& z : rep.above) rep.count_above += z.multiplicity;
    return rep;
}

} // namespace latrad

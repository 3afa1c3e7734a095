#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latrad/dispersion.hpp"
#include "latrad/lattice.hpp"

namespace latrad {

/// Either a one-sided limit lambda +- i0 or a genuinely complex eta.
class BoundaryValue {
public:
    static BoundaryValue limit(double lambda, Side side);
    static BoundaryValue complex(cplx eta);

    bool is_limit() const noexcept { return !eta_.has_value(); }
    double lambda() const noexcept { return lambda_; }
    Side side() const noexcept { return side_; }
    /// eta itself, or lambda for a limit.
    cplx point() const noexcept { return eta_ ? *eta_ : cplx(lambda_, 0.0); }
    BoundaryValue conjugate() const;

private:
    double lambda_ = 0.0;
    Side side_ = Side::plus;
    std::optional<cplx> eta_;
};

/// Zero entries mean "pick the default"; see resolve().
struct QuadratureConfig {
    int torus_order = 0;          // 4096 / 256 / 64 for d = 1 / 2 / >= 3; env LATRAD_TORUS_ORDER
    double delta = 0.0;           // delta_fraction * dist(lambda, S_0)
    double delta_fraction = 0.6;
    std::string chi_profile = "smooth";
    int rho_order = 24;           // Gauss nodes per rho subinterval, even
    int surface_resolution = 0;   // 512 for d <= 2, 128 for d >= 3
    int pou_exponent = 7;
    bool auto_order = true;       // raise orders to 4 max|xi| + 32
    bool check_doubling = true;   // off-spectrum doubling test

    // eta ladder oracle
    double ladder_start = 0.2;
    int ladder_halvings = 8;
    int extrapolation_degree = 3;
    double divergence_growth = 0.05;
    double oracle_abs_tol = 1e-12;
    double oracle_rel_tol = 1e-10;
};

/// Concrete orders for one evaluation.
struct ResolvedQuadrature {
    int d = 1;
    double lambda = 0.0;
    int torus_order = 0;
    double delta = 0.0;
    int rho_order = 0;
    int surface_resolution = 0;
    int pou_exponent = 7;
};

/// Applies defaults and the order floor for sites up to `reach` (max norm of
/// xi - y over the sites and supp f). Rejects an odd or too small torus order,
/// a delta outside (0, dist(lambda, S_0)) and unknown chi profiles.
ResolvedQuadrature resolve(const QuadratureConfig& cfg, int d, double lambda, int reach, bool needs_delta);

struct ResolventValue {
    LatticeSite site;
    cplx value;
    double error_estimate = 0.0;
    bool converged = true;
};

/// (R_eta f)(xi) by the periodic trapezoidal rule on T^d. The error estimate
/// compares orders n and n/2; with check_doubling, converged is cleared when
/// order 2n moves the value by more than 10x the estimate.
std::vector<ResolventValue> resolvent_offspectrum(const CompactLatticeFunction& f, cplx eta,
                                                  std::span<const LatticeSite> sites, const QuadratureConfig& cfg);
ResolventValue resolvent_offspectrum(const CompactLatticeFunction& f, cplx eta, const LatticeSite& xi,
                                     const QuadratureConfig& cfg);

/// Phi(xi, rho) = (2pi)^{1-d/2} chi(rho - lambda) int_{Gamma(rho)} fhat e^{ik.xi} ds/|grad phi|.
std::vector<cplx> surface_integral_phi(const CompactLatticeFunction& f, std::span<const LatticeSite> sites,
                                       double rho, double lambda, const QuadratureConfig& cfg);
cplx surface_integral_phi(const CompactLatticeFunction& f, const LatticeSite& xi, double rho, double lambda,
                          const QuadratureConfig& cfg);

/// Limiting absorption value (R_{lambda +- i0} f)(xi): nonsingular torus
/// part, principal value in rho over |rho - lambda| < delta, and the surface
/// term +-(i/2) Phi(xi, lambda). Complex eta, or real lambda off [-2d, 2d],
/// falls through to resolvent_offspectrum.
std::vector<ResolventValue> lap_apply(const CompactLatticeFunction& f, const BoundaryValue& bv,
                                      std::span<const LatticeSite> sites, const QuadratureConfig& cfg);
ResolventValue lap_apply(const CompactLatticeFunction& f, const BoundaryValue& bv, const LatticeSite& xi,
                         const QuadratureConfig& cfg);

/// E = R delta_0 at the given sites.
std::vector<ResolventValue> fundamental_solution(const BoundaryValue& bv, std::span<const LatticeSite> sites,
                                                 int d, const QuadratureConfig& cfg);
ResolventValue fundamental_solution(const BoundaryValue& bv, const LatticeSite& xi, const QuadratureConfig& cfg);

/// (R_eta f)(xi) through the dimension-reduced Green function (closed form in
/// one variable, adaptive quadrature in the rest). Valid for any eta off
/// the real segment [-2d, 2d], including |Im eta| far below what the torus
/// rule can resolve.
std::vector<cplx> resolvent_reduced(const CompactLatticeFunction& f, cplx eta, std::span<const LatticeSite> sites,
                                    const QuadratureConfig& cfg);

struct EtaLadder {
    std::vector<double> eps;
    std::vector<std::vector<cplx>> values;   // values[i][site]
};

/// R_{lambda +- i eps} f on eps = start / 2^i, i = 0..halvings.
EtaLadder eta_ladder(const CompactLatticeFunction& f, double lambda, Side side, std::span<const LatticeSite> sites,
                     const QuadratureConfig& cfg);

/// Neville extrapolation of the ladder to eps = 0 over windows of
/// degree + 1 points; the estimate is the change between the last two
/// windows. Throws divergent when the ladder grows instead of settling.
std::vector<ResolventValue> eta_extrapolate(const CompactLatticeFunction& f, double lambda, Side side,
                                            std::span<const LatticeSite> sites, const QuadratureConfig& cfg);
ResolventValue eta_extrapolate(const CompactLatticeFunction& f, double lambda, Side side, const LatticeSite& xi,
                               const QuadratureConfig& cfg);

/// True when the last three ladder values grow by more than `growth` each
/// while their increments fail to shrink.
bool ladder_diverges(std::span<const cplx> values, double growth);

struct LogCoefficient {
    cplx slope;               // coefficient of ln eps on the plus side
    double rms_residual = 0.0;
    std::vector<double> eps;
    std::vector<cplx> values;
};

/// d = 2, lambda = 0: slope of E_{i eps}(xi) against ln eps, eps from 1e-4
/// down to 1e-8. Throws fit_failed when the residual exceeds 1e-3 of the
/// value scale.
LogCoefficient log_coefficient_estimate(const LatticeSite& xi, const QuadratureConfig& cfg);

struct ParsevalReport {
    int radius = 0;
    double worst_ratio = 0.0;     // max over patches of lhs / rhs
    std::vector<double> lhs;      // per patch: sum_{B_R} |F|^2
    std::vector<double> rhs;      // per patch: 2 pi (2R + 1) int |g|^2 dk'
};

/// Patchwise Parseval bound for F(xi) = (2pi)^{1-d/2} int g e^{ik.xi} dk'
/// with g the integrand of Phi(., rho) on each graph patch.
ParsevalReport patch_parseval(const CompactLatticeFunction& f, double rho, double lambda, int radius,
                              const QuadratureConfig& cfg);

} // namespace latrad

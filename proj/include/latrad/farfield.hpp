#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "latrad/dispersion.hpp"
#include "latrad/lattice.hpp"
#include "latrad/resolvent.hpp"

namespace latrad {

/// a = sqrt(2pi) fhat(k) e^{i(sigma+2)pi/4} / (sqrt|K| |grad phi|) on the plus
/// side. The minus side uses fhat(-k) and the conjugate phase, which is
/// conj(a) whenever f is real.
cplx amplitude(const CompactLatticeFunction& f, const StationaryPoint& sp, Side side, double curvature_tol = 1e-9);

struct FarFieldTerm {
    StationaryPoint point;
    cplx amplitude;
};

struct FarFieldExpansion {
    int d = 1;
    std::vector<double> direction;
    double lambda = 0.0;
    Side side = Side::plus;
    std::vector<FarFieldTerm> terms;
    double order_constant = 0.0;     // observed sup |xi|^{(d+1)/2} |psi - expansion|
    std::vector<std::string> warnings;
};

/// Terms for direction omega: one per stationary point. Throws
/// vanishing_curvature when omega is a singular direction.
FarFieldExpansion farfield_expansion(const CompactLatticeFunction& f, const Direction& omega, double lambda, Side side,
                                     const StationaryOptions& opts = {});

/// sum_s e^{+-i mu_s |xi|} a_s / |xi|^{(d-1)/2}. Throws
/// direction_outside_domain unless xi / |xi| matches the expansion direction
/// within angle_tol radians.
cplx asymptotic_eval(const FarFieldExpansion& exp, const LatticeSite& xi, double angle_tol = 1e-10);

/// Builds the expansion for omega = xi / |xi| and evaluates it at xi.
cplx asymptotic_at(const CompactLatticeFunction& f, const LatticeSite& xi, double lambda, Side side);

/// psi(xi + e_j) - e^{+-i k_j} psi(xi), j = 1..d, for one wave.
std::vector<cplx> radiation_residual(const SiteFunction& psi, const StationaryPoint& sp, Side side,
                                     const LatticeSite& xi);
/// Same against a single-wave expansion; throws multi_wave_undecomposed when
/// the expansion has more than one term.
std::vector<cplx> radiation_residual(const SiteFunction& psi, const FarFieldExpansion& exp, const LatticeSite& xi);
/// Per-wave residuals summed, for input already split as psi = sum_s psi_s.
std::vector<cplx> radiation_residual(std::span<const SiteFunction> components, const FarFieldExpansion& exp,
                                     const LatticeSite& xi);

/// Lattice site nearest to r omega (coordinates rounded half away from zero).
LatticeSite ray_site(const Direction& omega, double r);

struct DecayFit {
    double slope = 0.0;          // -infinity when psi vanishes at every sample
    double residual = 0.0;       // rms of the log-log fit
    int skipped = 0;             // samples where psi vanished
    std::vector<double> radii;   // |xi| actually used
};

/// Least-squares slope of log|psi| against log|xi| at the ray sites for
/// `radii`. Needs at least 4 radii, increasing, spanning a factor >= 4.
DecayFit farfield_decay_fit(const SiteFunction& psi, const Direction& omega, std::span<const double> radii);

/// Fits log|v| against log r for given samples; same rules as above.
DecayFit decay_fit(std::span<const double> r, std::span<const double> magnitude);

/// arg(psi(xi + e_j) / psi(xi)), j zero based.
double local_wavenumber(const SiteFunction& psi, const LatticeSite& xi, int j);

struct ExponentialFit {
    std::vector<cplx> poles;        // z_s, samples ~ sum c_s z_s^n
    std::vector<cplx> coefficients;
    double residual = 0.0;          // relative rms misfit
};

/// Matrix pencil fit of y_n ~ sum_{s<order} c_s z_s^n.
ExponentialFit fit_exponentials(std::span<const cplx> y, int order);

struct WaveFit {
    std::vector<double> mu;         // fitted wavenumbers, in (-pi/h, pi/h], ascending
    std::vector<cplx> amplitudes;
    double step_length = 1.0;       // h = |step|
    double residual = 0.0;
};

/// Samples psi(n * step) |n step|^{(d-1)/2} for n = first..first+count-1 and
/// fits `order` plane waves along the ray.
WaveFit multi_wave_fit(const SiteFunction& psi, const LatticeSite& step, int first, int count, int order);

/// Distance between wavenumbers modulo 2 pi / h.
double wavenumber_distance(double a, double b, double step_length);

struct ComparisonRow {
    double radius = 0.0;
    cplx computed;
    cplx predicted;
    double scaled_residual = 0.0;   // |xi|^{(d+1)/2} |computed - predicted|
};

/// Far-field comparison along the sites xi: expansion for xi / |xi| against
/// lap_apply. The largest scaled residual is the observed order constant.
std::vector<ComparisonRow> compare_far_field(const CompactLatticeFunction& f, double lambda, Side side,
                                             std::span<const LatticeSite> sites, const QuadratureConfig& cfg);

/// CSV: radius,re_computed,im_computed,re_predicted,im_predicted,scaled_residual
void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows);

} // namespace latrad

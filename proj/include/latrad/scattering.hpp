#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latrad/lattice.hpp"
#include "latrad/resolvent.hpp"

namespace latrad {

/// I + T with T(x, y) = q(x) G(x - y) on supp q, G = R delta_0.
struct BirmanSchwingerSystem {
    std::vector<LatticeSite> support_sites;
    Eigen::MatrixXcd matrix;
    BoundaryValue bv = BoundaryValue::limit(0.0, Side::plus);

    size_t size() const noexcept { return support_sites.size(); }
};

/// Green function values G(x) for the given displacements. Limits use
/// lap_apply, complex eta and real eta off the spectrum use the reduced path
/// (d <= 3) or the torus rule.
std::vector<cplx> green_values(int d, const BoundaryValue& bv, std::span<const LatticeSite> displacements,
                               const QuadratureConfig& cfg);

BirmanSchwingerSystem assemble(const CompactLatticeFunction& q, const BoundaryValue& bv, const QuadratureConfig& cfg);

struct ScatteringSolution {
    CompactLatticeFunction density;      // phi with (I + T) phi = f, supported on supp q U supp f
    std::vector<ResolventValue> values;  // psi = R phi at the requested sites
    double rcond = 0.0;
};

/// psi = R (I + T)^{-1} f. Throws near_singular_system when the reciprocal
/// condition estimate of I + T drops below rcond_min.
ScatteringSolution solve_scattering(const CompactLatticeFunction& f, const CompactLatticeFunction& q,
                                    const BoundaryValue& bv, std::span<const LatticeSite> sites,
                                    const QuadratureConfig& cfg, double rcond_min = 1e-12);
ResolventValue solve_scattering(const CompactLatticeFunction& f, const CompactLatticeFunction& q,
                                const BoundaryValue& bv, const LatticeSite& xi, const QuadratureConfig& cfg);

/// det(I + T_lambda) for real lambda off [-2d, 2d]; real up to rounding.
double bound_state_determinant(const CompactLatticeFunction& q, double lambda, const QuadratureConfig& cfg);

enum class ZeroKind { sign_change, magnitude_minimum };

struct BoundState {
    double lambda = 0.0;
    int multiplicity = 1;
    ZeroKind kind = ZeroKind::sign_change;
};

struct BoundStateScanOptions {
    double window = 0.0;     // Lambda; 0 means 2 max|q| + 2
    int grid = 400;          // uniform points per side
    int edge_decades = 5;    // extra points at spacing * 10^-k, k = 1..edge_decades, next to the band edge
    double tolerance = 1e-8;
};

struct BoundStateReport {
    std::vector<BoundState> below;   // lambda < -2d
    std::vector<BoundState> above;   // lambda > 2d
    int count_below = 0;             // with multiplicity
    int count_above = 0;
    int n = 0;                       // |supp q|
    std::vector<std::string> warnings;
};

/// Eigenvalues of Delta + q outside the spectrum of Delta: zeros of
/// det(I + T_lambda) on [-2d - Lambda, -2d) and (2d, 2d + Lambda].
BoundStateReport bound_state_scan(const CompactLatticeFunction& q, const BoundStateScanOptions& opts,
                                  const QuadratureConfig& cfg);

} // namespace latrad

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latrad/lattice.hpp"

namespace latrad {

enum class Side { plus, minus };

inline double side_sign(Side s) noexcept { return s == Side::plus ? 1.0 : -1.0; }

/// Unit vector on the sphere S^{d-1}.
class Direction {
public:
    /// Normalises `v`; throws invalid_argument for the zero vector.
    explicit Direction(std::vector<double> v);
    static Direction toward(const LatticeSite& xi);

    int dim() const noexcept { return static_cast<int>(c_.size()); }
    double operator[](int j) const { return c_[static_cast<size_t>(j)]; }
    std::span<const double> components() const noexcept { return c_; }
    Direction operator-() const;

private:
    std::vector<double> c_;
};

/// Reduces k into the fundamental cube: [0, 2pi)^d when lambda < 0,
/// [-pi, pi)^d otherwise.
std::vector<double> reduce_to_cube(std::span<const double> k, double lambda);

/// Distance on T^d (coordinate differences taken modulo 2 pi).
double torus_distance(std::span<const double> a, std::span<const double> b);

struct SymbolValue {
    double value = 0.0;
    std::vector<double> gradient;
    std::vector<double> hessian_diagonal;   // the Hessian of phi is diagonal

    double hessian(int i, int j) const { return i == j ? hessian_diagonal[static_cast<size_t>(i)] : 0.0; }
    double gradient_norm() const;
};

/// phi(k) = 2 sum cos k_j with gradient and Hessian.
SymbolValue symbol(std::span<const double> k);
double phi(std::span<const double> k) noexcept;

/// Points of S_0 on [-2d, 2d], ascending.
std::vector<double> exceptional_set(int d);
/// lambda within tol of S_0.
bool exceptional_set_contains(double lambda, int d, double tol = 1e-9);
/// lambda in [-2d, 2d] and not in S_0.
bool is_regular(double lambda, int d, double tol = 1e-9);
double distance_to_exceptional_set(double lambda, int d);

/// Total (Gaussian) curvature of the level surface through k, closed form
///   K = sum_j sin^2 k_j prod_{m != j} cos k_m / (sum_j sin^2 k_j)^{(d+1)/2}.
/// Orientation: principal curvatures are positive where the surface bends
/// toward n = grad phi. Throws degenerate_point when grad phi vanishes.
double total_curvature(std::span<const double> k);

/// Principal curvatures from the Hessian projected on the tangent plane,
/// ascending. Independent of the closed form above.
std::vector<double> principal_curvatures(std::span<const double> k);
/// Product of principal_curvatures().
double projected_curvature(std::span<const double> k);

/// Positive minus negative principal curvatures. Throws degenerate_point if a
/// principal curvature is within tol of zero.
int signature(std::span<const double> k, double tol = 1e-9);

struct StationaryPoint {
    std::vector<double> k;          // reduced to the fundamental cube
    double mu = 0.0;                // k . omega
    double curvature = 0.0;         // total curvature K
    int signature = 0;              // only meaningful when |K| >= curvature_tol
    std::vector<int> sign_pattern;  // +1 / -1 branch of cos k_j; 0 marks omega_j == 0
    double kappa = 0.0;             // sin k_j = -kappa omega_j
    double gradient_norm = 0.0;
};

struct StationaryOptions {
    int cells = 512;
    double bisection_tol = 1e-13;
    double dedup_tol = 1e-8;
    double curvature_tol = 1e-9;
    double zero_component_tol = 1e-14;
    double tangency_tol = 1e-10;
    bool filter_curvature = true;
    bool polish = true;
};

struct StationaryResult {
    std::vector<StationaryPoint> points;            // regular points, sorted by mu
    std::vector<StationaryPoint> singular_contacts; // |K| < curvature_tol
    std::vector<std::string> warnings;

    bool singular() const noexcept { return !singular_contacts.empty(); }
};

/// Points of Gamma(lambda) whose normal grad phi points along omega, found by
/// enumerating the sign patterns of cos k_j on sin k_j = -kappa omega_j.
/// With filter_curvature off, contacts with |K| < curvature_tol are returned
/// among the points instead of separately.
StationaryResult stationary_points(const Direction& omega, double lambda, const StationaryOptions& opts = {});

struct ConvexityReport {
    double min_curvature = 0.0;
    double max_curvature = 0.0;
    std::vector<double> argmin;
    size_t nodes = 0;
    bool is_positive = false;
};

/// Extremes of K over a surface mesh of Gamma(lambda).
ConvexityReport convexity_scan(double lambda, int d, int resolution);

struct SingularCheck {
    bool is_singular = false;
    double min_abs_curvature = 0.0;
    size_t matched = 0;
};

SingularCheck singular_direction_check(const Direction& omega, double lambda, const StationaryOptions& opts = {});

/// Locates a point of Gamma(lambda) with K = 0 by bisecting sign changes of K
/// between neighbouring mesh nodes, and returns its normal direction.
/// Empty when K keeps one sign on the mesh.
std::optional<Direction> find_singular_direction(double lambda, int d, int resolution);

} // namespace latrad

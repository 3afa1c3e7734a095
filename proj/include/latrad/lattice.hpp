#pragma once

#include <compare>
#include <complex>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include "latrad/error.hpp"

namespace latrad {

using cplx = std::complex<double>;

/// A point of Z^d.
class LatticeSite {
public:
    LatticeSite() = default;
    explicit LatticeSite(std::vector<int> coords) : coords_(std::move(coords)) {}
    LatticeSite(std::initializer_list<int> coords) : coords_(coords) {}

    static LatticeSite origin(int d) { return LatticeSite(std::vector<int>(static_cast<size_t>(d), 0)); }
    static LatticeSite unit(int d, int j, int sign = 1);

    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    int operator[](int j) const { return coords_[static_cast<size_t>(j)]; }
    std::span<const int> coords() const noexcept { return coords_; }

    double norm() const noexcept;          // Euclidean |xi|
    int max_norm() const noexcept;         // sup norm, B_r membership

    LatticeSite operator+(const LatticeSite& o) const;
    LatticeSite operator-(const LatticeSite& o) const;
    LatticeSite operator-() const;

    auto operator<=>(const LatticeSite&) const = default;
    bool operator==(const LatticeSite&) const = default;

private:
    std::vector<int> coords_;
};

/// Cube [-r, r]^d.
struct BoxRegion {
    int radius = 1;

    explicit BoxRegion(int r);
    bool contains(const LatticeSite& s) const noexcept { return s.max_norm() <= radius; }
    long long site_count(int d) const;
    std::vector<LatticeSite> sites(int d) const;
};

/// Finitely supported complex function on Z^d. Absent keys are zero.
/// Values are immutable once built; every operation returns a new function.
class CompactLatticeFunction {
public:
    using Map = std::map<LatticeSite, cplx>;

    explicit CompactLatticeFunction(int d);
    CompactLatticeFunction(int d, Map entries);

    static CompactLatticeFunction delta(const LatticeSite& at, cplx value = 1.0);

    int dim() const noexcept { return d_; }
    const Map& entries() const noexcept { return entries_; }
    size_t support_size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    cplx operator()(const LatticeSite& s) const;
    std::vector<LatticeSite> support() const;
    int support_radius() const noexcept;   // smallest r with supp in B_r (0 when empty)
    bool is_real(double tol = 0.0) const noexcept;
    double max_abs() const noexcept;

    CompactLatticeFunction with(const LatticeSite& s, cplx value) const;
    CompactLatticeFunction operator+(const CompactLatticeFunction& o) const;
    CompactLatticeFunction operator-(const CompactLatticeFunction& o) const;
    CompactLatticeFunction operator*(cplx scale) const;
    CompactLatticeFunction conj() const;
    CompactLatticeFunction pruned(double tol = 0.0) const;

private:
    void check_dim(const LatticeSite& s) const;

    int d_;
    Map entries_;
};

/// Values of a lattice function on an arbitrary set of sites.
using SiteFunction = std::function<cplx(const LatticeSite&)>;

CompactLatticeFunction apply_laplacian(const CompactLatticeFunction& f);
CompactLatticeFunction apply_schrodinger(const CompactLatticeFunction& f,
                                         const CompactLatticeFunction& q, cplx lambda);
/// Forward difference psi(xi + e_j) - psi(xi); j is zero based.
CompactLatticeFunction difference_derivative(const CompactLatticeFunction& f, int j);

/// (2 pi)^{-d/2} sum_xi f(xi) exp(-i k.xi)
cplx fourier_transform(const CompactLatticeFunction& f, std::span<const double> k);

/// Laplacian of a function known only through samples.
cplx laplacian_at(const SiteFunction& psi, const LatticeSite& xi);

/// sum_{B_r}(Lap psi E - psi Lap E) - sum_{dB_r}(psi' E - psi E'), corners
/// counted once per face. Functions must be evaluable on B_{r+1}.
cplx green_identity_residual(const SiteFunction& psi, const SiteFunction& e, int d, const BoxRegion& box);
cplx green_identity_residual(const CompactLatticeFunction& psi, const CompactLatticeFunction& e,
                             const BoxRegion& box);

/// (1/R) sum over B_{2R} \ B_R of |psi|^2.
double shell_average(const SiteFunction& psi, int d, int radius);

/// Sites of B_r in lexicographic order.
std::vector<LatticeSite> box_sites(int d, int r);

} // namespace latrad

#include "latrad/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace latrad {

// ---------------------------------------------------------------- LatticeSite

LatticeSite LatticeSite::unit(int d, int j, int sign) {
    if (j < 0 || j >= d)
        throw Error(ErrorCode::index_out_of_range, "unit vector index " + std::to_string(j + 1) +
                                                       " outside 1.." + std::to_string(d));
    std::vector<int> c(static_cast<size_t>(d), 0);
    c[static_cast<size_t>(j)] = sign;
    return LatticeSite(std::move(c));
}

double LatticeSite::norm() const noexcept {
    double s = 0.0;
    for (int c : coords_) s += double(c) * double(c);
    return std::sqrt(s);
}

int LatticeSite::max_norm() const noexcept {
    int m = 0;
    for (int c : coords_) m = std::max(m, std::abs(c));
    return m;
}

LatticeSite LatticeSite::operator+(const LatticeSite& o) const {
    if (o.dim() != dim()) throw Error(ErrorCode::dimension_mismatch, "site dimensions differ");
    std::vector<int> c(coords_);
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.coords_[i];
    return LatticeSite(std::move(c));
}

LatticeSite LatticeSite::operator-(const LatticeSite& o) const {
    if (o.dim() != dim()) throw Error(ErrorCode::dimension_mismatch, "site dimensions differ");
    std::vector<int> c(coords_);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.coords_[i];
    return LatticeSite(std::move(c));
}

LatticeSite LatticeSite::operator-() const {
    std::vector<int> c(coords_);
    for (auto& x : c) x = -x;
    return LatticeSite(std::move(c));
}

// ------------------------------------------------------------------ BoxRegion

BoxRegion::BoxRegion(int r) : radius(r) {
    if (r < 1) throw Error(ErrorCode::invalid_argument, "box radius must be >= 1");
}

long long BoxRegion::site_count(int d) const {
    long long n = 1;
    for (int i = 0; i < d; ++i) n *= 2LL * radius + 1;
    return n;
}

std::vector<LatticeSite> BoxRegion::sites(int d) const { return box_sites(d, radius); }

std::vector<LatticeSite> box_sites(int d, int r) {
    std::vector<LatticeSite> out;
    if (d < 1 || r < 0) return out;
    std::vector<int> c(static_cast<size_t>(d), -r);
    while (true) {
        out.emplace_back(c);
        int j = d - 1;
        while (j >= 0 && c[static_cast<size_t>(j)] == r) {
            c[static_cast<size_t>(j)] = -r;
            --j;
        }
        if (j < 0) break;
        ++c[static_cast<size_t>(j)];
    }
    return out;
}

// ---------------------------------------------------- CompactLatticeFunction

CompactLatticeFunction::CompactLatticeFunction(int d) : d_(d) {
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
}

CompactLatticeFunction::CompactLatticeFunction(int d, Map entries) : d_(d), entries_(std::move(entries)) {
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    for (const auto& [s, v] : entries_) check_dim(s);
}

CompactLatticeFunction CompactLatticeFunction::delta(const LatticeSite& at, cplx value) {
    CompactLatticeFunction f(at.dim());
    f.entries_.emplace(at, value);
    return f;
}

void CompactLatticeFunction::check_dim(const LatticeSite& s) const {
    if (s.dim() != d_)
        throw Error(ErrorCode::dimension_mismatch, "site of dimension " + std::to_string(s.dim()) +
                                                       " in a function on Z^" + std::to_string(d_));
}

cplx CompactLatticeFunction::operator()(const LatticeSite& s) const {
    check_dim(s);
    auto it = entries_.find(s);
    return it == entries_.end() ? cplx{} : it->second;
}

std::vector<LatticeSite> CompactLatticeFunction::support() const {
    std::vector<LatticeSite> out;
    out.reserve(entries_.size());
    for (const auto& [s, v] : entries_) out.push_back(s);
    return out;
}

int CompactLatticeFunction::support_radius() const noexcept {
    int r = 0;
    for (const auto& [s, v] : entries_) r = std::max(r, s.max_norm());
    return r;
}

bool CompactLatticeFunction::is_real(double tol) const noexcept {
    return std::all_of(entries_.begin(), entries_.end(),
                       [tol](const auto& e) { return std::abs(e.second.imag()) <= tol; });
}

double CompactLatticeFunction::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& [s, v] : entries_) m = std::max(m, std::abs(v));
    return m;
}

CompactLatticeFunction CompactLatticeFunction::with(const LatticeSite& s, cplx value) const {
    check_dim(s);
    CompactLatticeFunction out(*this);
    out.entries_[s] = value;
    return out;
}

CompactLatticeFunction CompactLatticeFunction::operator+(const CompactLatticeFunction& o) const {
    if (o.d_ != d_) throw Error(ErrorCode::dimension_mismatch, "function dimensions differ");
    CompactLatticeFunction out(*this);
    for (const auto& [s, v] : o.entries_) out.entries_[s] += v;
    return out;
}

CompactLatticeFunction CompactLatticeFunction::operator-(const CompactLatticeFunction& o) const {
    return *this + o * cplx(-1.0);
}

CompactLatticeFunction CompactLatticeFunction::operator*(cplx scale) const {
    CompactLatticeFunction out(*this);
    for (auto& [s, v] : out.entries_) v *= scale;
    return out;
}

CompactLatticeFunction CompactLatticeFunction::conj() const {
    CompactLatticeFunction out(*this);
    for (auto& [s, v] : out.entries_) v = std::conj(v);
    return out;
}

CompactLatticeFunction CompactLatticeFunction::pruned(double tol) const {
    CompactLatticeFunction out(d_);
    for (const auto& [s, v] : entries_)
        if (std::abs(v) > tol) out.entries_.emplace(s, v);
    return out;
}

// ----------------------------------------------------------------- operators

CompactLatticeFunction apply_laplacian(const CompactLatticeFunction& f) {
    const int d = f.dim();
    CompactLatticeFunction::Map out;
    for (const auto& [s, v] : f.entries()) {
        std::vector<int> c(s.coords().begin(), s.coords().end());
        for (int j = 0; j < d; ++j) {
            for (int sgn : {-1, 1}) {
                c[static_cast<size_t>(j)] += sgn;
                out[LatticeSite(c)] += v;
                c[static_cast<size_t>(j)] -= sgn;
            }
        }
    }
    return CompactLatticeFunction(d, std::move(out));
}

CompactLatticeFunction apply_schrodinger(const CompactLatticeFunction& f, const CompactLatticeFunction& q,
                                         cplx lambda) {
    if (f.dim() != q.dim()) throw Error(ErrorCode::dimension_mismatch, "f and q dimensions differ");
    CompactLatticeFunction::Map out = apply_laplacian(f).entries();
    for (const auto& [s, v] : f.entries()) out[s] += (q(s) - lambda) * v;
    return CompactLatticeFunction(f.dim(), std::move(out));
}

CompactLatticeFunction difference_derivative(const CompactLatticeFunction& f, int j) {
    const int d = f.dim();
    if (j < 0 || j >= d)
        throw Error(ErrorCode::index_out_of_range,
                    "derivative index " + std::to_string(j + 1) + " outside 1.." + std::to_string(d));
    const LatticeSite e = LatticeSite::unit(d, j);
    CompactLatticeFunction::Map out;
    // (df)(xi) = f(xi + e) - f(xi): the value at s feeds xi = s - e and xi = s.
    for (const auto& [s, v] : f.entries()) {
        out[s - e] += v;
        out[s] -= v;
    }
    return CompactLatticeFunction(d, std::move(out));
}

cplx fourier_transform(const CompactLatticeFunction& f, std::span<const double> k) {
    const int d = f.dim();
    if (static_cast<int>(k.size()) != d)
        throw Error(ErrorCode::dimension_mismatch, "torus point dimension differs from function dimension");
    cplx sum{};
    for (const auto& [s, v] : f.entries()) {
        double phase = 0.0;
        for (int j = 0; j < d; ++j) phase += k[static_cast<size_t>(j)] * s[j];
        sum += v * std::polar(1.0, -phase);
    }
    return sum * std::pow(2.0 * std::numbers::pi, -0.5 * d);
}

cplx laplacian_at(const SiteFunction& psi, const LatticeSite& xi) {
    cplx sum{};
    const int d = xi.dim();
    for (int j = 0; j < d; ++j) {
        sum += psi(xi + LatticeSite::unit(d, j, 1));
        sum += psi(xi + LatticeSite::unit(d, j, -1));
    }
    return sum;
}

cplx green_identity_residual(const SiteFunction& psi, const SiteFunction& e, int d, const BoxRegion& box) {
    cplx volume{};
    cplx boundary{};
    for (const auto& xi : box.sites(d)) {
        const cplx p = psi(xi);
        const cplx g = e(xi);
        volume += laplacian_at(psi, xi) * g - p * laplacian_at(e, xi);
        for (int j = 0; j < d; ++j) {
            if (std::abs(xi[j]) != box.radius) continue;
            const LatticeSite out = xi + LatticeSite::unit(d, j, xi[j] > 0 ? 1 : -1);
            boundary += psi(out) * g - p * e(out);
        }
    }
    return volume - boundary;
}

cplx green_identity_residual(const CompactLatticeFunction& psi, const CompactLatticeFunction& e,
                             const BoxRegion& box) {
    if (psi.dim() != e.dim()) throw Error(ErrorCode::dimension_mismatch, "function dimensions differ");
    return green_identity_residual([&](const LatticeSite& s) { return psi(s); },
                                   [&](const LatticeSite& s) { return e(s); }, psi.dim(), box);
}

double shell_average(const SiteFunction& psi, int d, int radius) {
    if (radius < 1) throw Error(ErrorCode::invalid_argument, "shell radius must be >= 1");
    double sum = 0.0;
    for (const auto& xi : box_sites(d, 2 * radius)) {
        if (xi.max_norm() <= radius) continue;
        sum += std::norm(psi(xi));
    }
    return sum / radius;
}

} // namespace latrad

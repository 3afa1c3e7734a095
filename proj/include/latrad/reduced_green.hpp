#pragma once

#include <span>

#include "latrad/lattice.hpp"

namespace latrad::reduced {

/// (1/2pi) int e^{ikn} / (2cos k - z) dk = w^|n| / (w - 1/w), w + 1/w = z, |w| < 1.
cplx green_1d(int n, cplx z);

/// G_eta(x) = (2pi)^{-d} int_{T^d} e^{ik.x} / (phi(k) - eta) dk for eta off
/// [-2d, 2d]. One variable is done in closed form and the others by nested
/// adaptive Gauss-Kronrod, split where the inner problem crosses its critical
/// values.
cplx green(std::span<const int> x, cplx eta, double abs_tol, double rel_tol);

} // namespace latrad::reduced

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace latrad {

/// One graph patch k_j = sheet * arccos(lambda/2 - sum_{m != j} cos k_m)
/// over the base torus T^{d-1}.
struct SurfacePatch {
    int lift_axis = 0;
    int sheet = 1;
};

/// Quadrature mesh of Gamma(lambda) = {phi(k) = lambda}.
///
/// Every surface point is covered by the d lift axes with partition-of-unity
/// weights w_j = |sin k_j|^p / sum_m |sin k_m|^p (p odd). A node of patch j
/// carries w_j times the graph measure dk'/(2 |sin k_j|), so summing
/// weight * F over all nodes approximates the integral of F ds / |grad phi|.
/// Nodes with zero weight (edges of the base region) are dropped.
struct SurfaceMesh {
    int d = 1;
    double level = 0.0;
    int resolution = 0;
    int pou_exponent = 7;
    std::vector<SurfacePatch> patches;
    std::vector<int> patch_id;      // per node
    std::vector<double> k;          // size() * d
    std::vector<double> weight;     // per node, approximates ds / |grad phi|
    std::vector<unsigned char> coarse;  // base indices all even: the resolution/2 grid

    size_t size() const noexcept { return weight.size(); }
    std::span<const double> point(size_t i) const {
        return {k.data() + i * static_cast<size_t>(d), static_cast<size_t>(d)};
    }
    /// Approximate surface measure of Gamma(level).
    double total_measure() const;
};

/// Meshes Gamma(lambda) with `resolution` base nodes per axis of T^{d-1}.
/// Throws invalid_argument for resolution < 2 and empty_surface for
/// |lambda| > 2d.
SurfaceMesh surface_mesh(double lambda, int d, int resolution, int pou_exponent = 7);

/// CSV: patch_id,k_1..k_d,weight
void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh);

struct Segment2 {
    double x0, y0, x1, y1;
};

/// Marching-squares contour of 2cos x + 2cos y = level over [lo, lo+2pi]^2.
std::vector<Segment2> level_curve_segments(double level, int resolution, double lo);

/// SVG of the level curves of Gamma(lambda): the curve itself for d = 2,
/// coordinate slices k_3 = const for d = 3.
void write_surface_svg(std::ostream& os, double lambda, int d, int resolution, int slices = 5);

} // namespace latrad

#include "latrad/surface_mesh.hpp"

#include <cmath>
#include <numbers>

#include "latrad/error.hpp"
#include "latrad/kernels.hpp"

namespace latrad {

double SurfaceMesh::total_measure() const {
    // weight approximates ds / |grad phi|; multiply back by |grad phi|
    std::vector<double> terms(size());
    for (size_t i = 0; i < size(); ++i) {
        double s = 0.0;
        for (double x : point(i)) s += std::sin(x) * std::sin(x);
        terms[i] = weight[i] * 2.0 * std::sqrt(s);
    }
    return kernels::pairwise_sum(std::span<const double>(terms));
}

SurfaceMesh surface_mesh(double lambda, int d, int resolution, int pou_exponent) {
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    if (resolution < 2) throw Error(ErrorCode::invalid_argument, "surface resolution must be >= 2");
    if (pou_exponent < 1) throw Error(ErrorCode::invalid_argument, "partition exponent must be >= 1");
    if (!(std::abs(lambda) <= 2.0 * d))
        throw Error(ErrorCode::empty_surface, "Gamma(lambda) is empty for |lambda| > 2d");

    const double pi = std::numbers::pi;
    const int nb = d - 1;
    const double h = 2.0 * pi / resolution;
    const double cell = std::pow(h, nb);
    long long total = 1;
    for (int i = 0; i < nb; ++i) total *= resolution;

    SurfaceMesh mesh;
    mesh.d = d;
    mesh.level = lambda;
    mesh.resolution = resolution;
    mesh.pou_exponent = pou_exponent;

    std::vector<double> kk(static_cast<size_t>(d));
    std::vector<double> base(static_cast<size_t>(nb));
    for (int axis = 0; axis < d; ++axis) {
        for (int sheet : {1, -1}) {
            const int pid = static_cast<int>(mesh.patches.size());
            mesh.patches.push_back({axis, sheet});
            for (long long idx = 0; idx < total; ++idx) {
                long long rem = idx;
                bool even = true;
                for (int i = nb - 1; i >= 0; --i) {
                    const long long bi = rem % resolution;
                    base[static_cast<size_t>(i)] = -pi + h * double(bi);
                    even = even && bi % 2 == 0;
                    rem /= resolution;
                }
                double c = 0.5 * lambda;
                for (double x : base) c -= std::cos(x);
                if (std::abs(c) >= 1.0) continue;
                const double kj = sheet * std::acos(c);
                for (int m = 0, b = 0; m < d; ++m) kk[static_cast<size_t>(m)] = (m == axis) ? kj : base[static_cast<size_t>(b++)];
                const double sj = std::abs(std::sin(kj));
                double denom = 0.0;
                for (double x : kk) denom += std::pow(std::abs(std::sin(x)), pou_exponent);
                if (sj == 0.0 || denom == 0.0) continue;
                const double w = cell * std::pow(sj, pou_exponent - 1) / (2.0 * denom);
                if (!(w > 0.0)) continue;
                mesh.patch_id.push_back(pid);
                mesh.k.insert(mesh.k.end(), kk.begin(), kk.end());
                mesh.weight.push_back(w);
                mesh.coarse.push_back(even ? 1 : 0);
            }
        }
    }
    return mesh;
}

} // namespace latrad

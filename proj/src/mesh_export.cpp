#include <algorithm>
#include <cmath>
#include <map>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "latrad/error.hpp"
#include "latrad/surface_mesh.hpp"

namespace latrad {

void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh) {
    os << "patch_id";
    for (int j = 1; j <= mesh.d; ++j) os << ",k_" << j;
    os << ",weight\n";
    os << std::setprecision(17);
    for (size_t i = 0; i < mesh.size(); ++i) {
        os << mesh.patch_id[i];
        for (double x : mesh.point(i)) os << ',' << x;
        os << ',' << mesh.weight[i] << '\n';
    }
}

namespace {

std::vector<Segment2> contour(double level, double shift, int n, double lo) {
    const double h = 2.0 * std::numbers::pi / n;
    auto f = [&](int i, int j) {
        return 2.0 * std::cos(lo + i * h) + 2.0 * std::cos(lo + j * h) + shift - level;
    };
    auto interp = [&](double xa, double ya, double fa, double xb, double yb, double fb) {
        const double t = fa / (fa - fb);
        return std::pair{xa + t * (xb - xa), ya + t * (yb - ya)};
    };
    std::vector<Segment2> out;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x0 = lo + i * h, x1 = x0 + h, y0 = lo + j * h, y1 = y0 + h;
            const double v[4] = {f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)};
            const double cx[4] = {x0, x1, x1, x0};
            const double cy[4] = {y0, y0, y1, y1};
            std::vector<std::pair<double, double>> hits;
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if ((v[a] < 0) != (v[b] < 0)) hits.push_back(interp(cx[a], cy[a], v[a], cx[b], cy[b], v[b]));
            }
            if (hits.size() == 2) {
                out.push_back({hits[0].first, hits[0].second, hits[1].first, hits[1].second});
            } else if (hits.size() == 4) {
                // saddle cell: pair by the sign of the centre value
                const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                if ((centre < 0) == (v[0] < 0)) {
                    out.push_back({hits[0].first, hits[0].second, hits[1].first, hits[1].second});
                    out.push_back({hits[2].first, hits[2].second, hits[3].first, hits[3].second});
                } else {
                    out.push_back({hits[0].first, hits[0].second, hits[3].first, hits[3].second});
                    out.push_back({hits[1].first, hits[1].second, hits[2].first, hits[2].second});
                }
            }
        }
    }
    return out;
}

// Joins segments that share endpoints into polylines.
std::vector<std::vector<std::pair<double, double>>> chain(const std::vector<Segment2>& segs) {
    auto key = [](double x, double y) { return std::pair{std::llround(x * 1e9), std::llround(y * 1e9)}; };
    std::map<std::pair<long long, long long>, std::vector<size_t>> ends;
    for (size_t i = 0; i < segs.size(); ++i) {
        ends[key(segs[i].x0, segs[i].y0)].push_back(i);
        ends[key(segs[i].x1, segs[i].y1)].push_back(i);
    }
    std::vector<char> used(segs.size(), 0);
    std::vector<std::vector<std::pair<double, double>>> lines;
    auto extend = [&](std::vector<std::pair<double, double>>& line) {
        for (;;) {
            const auto [x, y] = line.back();
            size_t next = segs.size();
            for (size_t j : ends[key(x, y)])
                if (!used[j]) {
                    next = j;
                    break;
                }
            if (next == segs.size()) return;
            used[next] = 1;
            const auto& s = segs[next];
            const bool forward = key(s.x0, s.y0) == key(x, y);
            line.emplace_back(forward ? s.x1 : s.x0, forward ? s.y1 : s.y0);
        }
    };
    for (size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        std::vector<std::pair<double, double>> line{{segs[i].x0, segs[i].y0}, {segs[i].x1, segs[i].y1}};
        extend(line);
        std::reverse(line.begin(), line.end());
        extend(line);
        lines.push_back(std::move(line));
    }
    return lines;
}

void svg_panel(std::ostream& os, const std::vector<Segment2>& segs, double lo, double ox, double oy, double size,
               const std::string& title) {
    const double scale = size / (2.0 * std::numbers::pi);
    os << "<g>\n<rect x=\"" << ox << "\" y=\"" << oy << "\" width=\"" << size << "\" height=\"" << size
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << ox + 4 << "\" y=\"" << oy + 14 << "\" font-size=\"12\">" << title << "</text>\n";
    for (const auto& line : chain(segs)) {
        os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
        for (size_t i = 0; i < line.size(); ++i)
            os << (i ? " " : "") << ox + (line[i].first - lo) * scale << ',' << oy + size - (line[i].second - lo) * scale;
        os << "\"/>\n";
    }
    os << "</g>\n";
}

} // namespace

std::vector<Segment2> level_curve_segments(double level, int resolution, double lo) {
    if (resolution < 2) throw Error(ErrorCode::invalid_argument, "resolution must be >= 2");
    return contour(level, 0.0, resolution, lo);
}

void write_surface_svg(std::ostream& os, double lambda, int d, int resolution, int slices) {
    if (d != 2 && d != 3) throw Error(ErrorCode::invalid_argument, "SVG export supports d = 2 and d = 3");
    if (resolution < 2) throw Error(ErrorCode::invalid_argument, "resolution must be >= 2");
    if (!(std::abs(lambda) <= 2.0 * d)) throw Error(ErrorCode::empty_surface, "Gamma(lambda) is empty");
    const double lo = lambda < 0 ? 0.0 : -std::numbers::pi;
    const double size = 320.0;
    os << std::setprecision(6);
    if (d == 2) {
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 20 << "\" height=\"" << size + 20
           << "\">\n";
        std::ostringstream t;
        t << "lambda = " << lambda;
        svg_panel(os, contour(lambda, 0.0, resolution, lo), lo, 10, 10, size, t.str());
        os << "</svg>\n";
        return;
    }
    if (slices < 1) throw Error(ErrorCode::invalid_argument, "need at least one slice");
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << slices * (size + 10) + 10 << "\" height=\""
       << size + 20 << "\">\n";
    for (int s = 0; s < slices; ++s) {
        const double k3 = lo + 2.0 * std::numbers::pi * (s + 0.5) / slices;
        std::ostringstream t;
        t << "k3 = " << k3;
        svg_panel(os, contour(lambda, 2.0 * std::cos(k3), resolution, lo), lo, 10 + s * (size + 10), 10, size,
                  t.str());
    }
    os << "</svg>\n";
}

} // namespace latrad

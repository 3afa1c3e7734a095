#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "latrad/dispersion.hpp"
#include "latrad/farfield.hpp"
#include "latrad/io.hpp"
#include "latrad/resolvent.hpp"
#include "latrad/scattering.hpp"
#include "latrad/surface_mesh.hpp"

namespace latrad::cli {

namespace {

using nlohmann::json;

struct Globals {
    int d = 2;
    double lambda = 3.0;
    std::string side = "plus";
    std::string config;
    std::string out;
    std::string format;
};

Side parse_side(const std::string& s) {
    if (s == "plus") return Side::plus;
    if (s == "minus") return Side::minus;
    throw Error(ErrorCode::invalid_argument, "side must be plus or minus");
}

QuadratureConfig load_config(const Globals& g) {
    return g.config.empty() ? QuadratureConfig{} : read_config_file(g.config);
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

// Writes to --out when given, otherwise to the default stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error(ErrorCode::io_error, "cannot write " + path);
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

std::vector<LatticeSite> pick_sites(int d, const std::vector<int>& xi, int window) {
    if (!xi.empty() && window > 0) throw Error(ErrorCode::invalid_argument, "give --xi or --window, not both");
    if (window > 0) return box_sites(d, window);
    if (xi.empty()) return {LatticeSite::origin(d)};
    if (static_cast<int>(xi.size()) % d != 0)
        throw Error(ErrorCode::dimension_mismatch, "--xi needs a multiple of d coordinates");
    std::vector<LatticeSite> out;
    for (size_t i = 0; i < xi.size(); i += static_cast<size_t>(d))
        out.emplace_back(std::vector<int>(xi.begin() + static_cast<long>(i), xi.begin() + static_cast<long>(i) + d));
    return out;
}

void write_values(std::ostream& os, const std::string& format, int d, const std::vector<ResolventValue>& vals) {
    if (format == "json") {
        json rows = json::array();
        for (const auto& v : vals)
            rows.push_back({{"xi", std::vector<int>(v.site.coords().begin(), v.site.coords().end())},
                            {"re", v.value.real()},
                            {"im", v.value.imag()},
                            {"error_estimate", v.error_estimate},
                            {"converged", v.converged}});
        os << rows.dump(2) << '\n';
        return;
    }
    if (format != "csv") throw Error(ErrorCode::invalid_argument, "format must be csv or json here");
    for (int j = 1; j <= d; ++j) os << "xi_" << j << ',';
    os << "re,im,error_estimate\n";
    for (const auto& v : vals) {
        for (int c : v.site.coords()) os << c << ',';
        os << fmt(v.value.real()) << ',' << fmt(v.value.imag()) << ',' << fmt(v.error_estimate) << '\n';
    }
}

// ------------------------------------------------------------------ commands

void cmd_surface(const Globals& g, int resolution, const std::string& plot, std::ostream& out) {
    const std::string format = g.format.empty() ? "csv" : g.format;
    Sink sink(g.out, out);
    if (format == "svg") {
        write_surface_svg(*sink, g.lambda, g.d, resolution);
    } else {
        const SurfaceMesh mesh = surface_mesh(g.lambda, g.d, resolution);
        if (mesh.size() == 0) throw Error(ErrorCode::empty_surface, "level set is empty");
        if (format == "csv") {
            write_mesh_csv(*sink, mesh);
        } else if (format == "json") {
            json j{{"d", g.d}, {"lambda", g.lambda}, {"resolution", resolution}, {"nodes", mesh.size()},
                   {"total_measure", mesh.total_measure()}};
            if (is_regular(g.lambda, g.d)) {
                const ConvexityReport c = convexity_scan(g.lambda, g.d, resolution);
                j["min_curvature"] = c.min_curvature;
                j["max_curvature"] = c.max_curvature;
                j["convex"] = c.is_positive;
            }
            *sink << j.dump(2) << '\n';
        } else {
            throw Error(ErrorCode::invalid_argument, "format must be csv, json or svg");
        }
    }
    if (!plot.empty()) {
        std::ofstream svg(plot);
        if (!svg) throw Error(ErrorCode::io_error, "cannot write " + plot);
        write_surface_svg(svg, g.lambda, g.d, resolution);
    }
}

void cmd_green(const Globals& g, const std::string& fspec, const std::vector<int>& xi, int window,
               const std::string& method, double eta_im, std::ostream& out) {
    const QuadratureConfig cfg = load_config(g);
    const CompactLatticeFunction f = load_function(fspec, g.d);
    const auto sites = pick_sites(g.d, xi, window);
    const Side side = parse_side(g.side);
    std::vector<ResolventValue> vals;
    if (eta_im != 0.0 || method == "offspectrum") {
        vals = resolvent_offspectrum(f, cplx(g.lambda, eta_im), sites, cfg);
    } else if (method == "lap") {
        vals = lap_apply(f, BoundaryValue::limit(g.lambda, side), sites, cfg);
    } else if (method == "eta") {
        vals = eta_extrapolate(f, g.lambda, side, sites, cfg);
    } else {
        throw Error(ErrorCode::invalid_argument, "method must be lap, eta or offspectrum");
    }
    Sink sink(g.out, out);
    write_values(*sink, g.format.empty() ? "csv" : g.format, g.d, vals);
}

void cmd_farfield(const Globals& g, const std::string& fspec, const std::vector<int>& dir,
                  const std::vector<double>& radii, std::ostream& out) {
    const QuadratureConfig cfg = load_config(g);
    const CompactLatticeFunction f = load_function(fspec, g.d);
    const Side side = parse_side(g.side);
    if (static_cast<int>(dir.size()) != g.d)
        throw Error(ErrorCode::dimension_mismatch, "--direction needs d integer components");
    const LatticeSite step{std::vector<int>(dir)};
    const Direction omega = Direction::toward(step);
    const std::string format = g.format.empty() ? "csv" : g.format;
    Sink sink(g.out, out);
    if (format == "json") {
        const FarFieldExpansion exp = farfield_expansion(f, omega, g.lambda, side);
        json terms = json::array();
        for (const auto& t : exp.terms)
            terms.push_back({{"k", t.point.k},
                             {"mu", t.point.mu},
                             {"curvature", t.point.curvature},
                             {"signature", t.point.signature},
                             {"amplitude", {t.amplitude.real(), t.amplitude.imag()}}});
        *sink << json{{"direction", exp.direction}, {"lambda", g.lambda}, {"side", g.side}, {"terms", terms},
                      {"warnings", exp.warnings}}
                     .dump(2)
              << '\n';
        return;
    }
    if (format != "csv") throw Error(ErrorCode::invalid_argument, "format must be csv or json");
    std::vector<LatticeSite> sites;
    for (double r : radii) {
        // lattice multiples of the direction keep xi / |xi| on the ray exactly
        const int n = std::max(1, static_cast<int>(std::lround(r / step.norm())));
        std::vector<int> c(dir);
        for (int& v : c) v *= n;
        sites.emplace_back(std::move(c));
    }
    const auto rows = compare_far_field(f, g.lambda, side, sites, cfg);
    write_comparison_csv(*sink, rows);
}

void cmd_scatter(const Globals& g, const std::string& fspec, const std::string& qspec, const std::vector<int>& xi,
                 int window, std::ostream& out) {
    const QuadratureConfig cfg = load_config(g);
    const CompactLatticeFunction f = load_function(fspec, g.d);
    const CompactLatticeFunction q = require_real(load_function(qspec, g.d));
    const auto sites = pick_sites(g.d, xi, window);
    const auto sol = solve_scattering(f, q, BoundaryValue::limit(g.lambda, parse_side(g.side)), sites, cfg);
    Sink sink(g.out, out);
    write_values(*sink, g.format.empty() ? "csv" : g.format, g.d, sol.values);
}

void cmd_s0(const Globals& g, std::ostream& out) {
    const auto s = exceptional_set(g.d);
    Sink sink(g.out, out);
    const std::string format = g.format.empty() ? "json" : g.format;
    if (format == "json") {
        *sink << json{{"d", g.d}, {"s0", s}}.dump() << '\n';
    } else if (format == "csv") {
        *sink << "lambda\n";
        for (double v : s) *sink << fmt(v) << '\n';
    } else {
        throw Error(ErrorCode::invalid_argument, "format must be csv or json");
    }
}

void cmd_boundstates(const Globals& g, const std::string& qspec, double window, int grid, std::ostream& out) {
    const QuadratureConfig cfg = load_config(g);
    const CompactLatticeFunction q = require_real(load_function(qspec, g.d));
    BoundStateScanOptions opts;
    opts.window = window;
    opts.grid = grid;
    const BoundStateReport rep = bound_state_scan(q, opts, cfg);
    auto expand = [](const std::vector<BoundState>& v) {
        std::vector<double> out;
        for (const auto& z : v)
            for (int m = 0; m < z.multiplicity; ++m) out.push_back(z.lambda);
        return out;
    };
    const std::string format = g.format.empty() ? "json" : g.format;
    Sink sink(g.out, out);
    if (format == "json") {
        *sink << json{{"below", expand(rep.below)},
                      {"above", expand(rep.above)},
                      {"counts", {{"below", rep.count_below}, {"above", rep.count_above}}},
                      {"N", rep.n},
                      {"warnings", rep.warnings}}
                     .dump(2)
              << '\n';
    } else if (format == "csv") {
        *sink << "side,lambda,multiplicity\n";
        for (const auto& z : rep.below) *sink << "below," << fmt(z.lambda) << ',' << z.multiplicity << '\n';
        for (const auto& z : rep.above) *sink << "above," << fmt(z.lambda) << ',' << z.multiplicity << '\n';
    } else {
        throw Error(ErrorCode::invalid_argument, "format must be csv or json");
    }
}

bool cmd_selftest(std::ostream& out) {
    QuadratureConfig cfg;
    bool all = true;
    auto check = [&](const std::string& name, const std::function<double()>& run, double tol) {
        double err = 0.0;
        bool ok = false;
        try {
            err = run();
            ok = err <= tol;
        } catch (const Error& e) {
            out << "FAIL " << name << " (" << error_code_name(e.code()) << ": " << e.what() << ")\n";
            all = false;
            return;
        }
        out << (ok ? "PASS " : "FAIL ") << name << " err=" << std::scientific << std::setprecision(2) << err
            << " tol=" << tol << std::defaultfloat << '\n';
        all = all && ok;
    };
    check("s0 d=2", [] {
        const auto s = exceptional_set(2);
        return s == std::vector<double>{-4.0, 0.0, 4.0} ? 0.0 : 1.0;
    }, 0.0);
    check("offspectrum d=2 eta=100", [&] {
        const auto v = resolvent_offspectrum(CompactLatticeFunction::delta(LatticeSite{0, 0}), 100.0, LatticeSite{0, 0}, cfg);
        return std::abs(v.value - (-0.010004003604));
    }, 1e-9);
    check("closed form d=1 lambda=sqrt2", [&] {
        const double lam = std::sqrt(2.0);
        std::vector<LatticeSite> s;
        for (int n = 0; n <= 10; ++n) s.push_back(LatticeSite{n});
        const auto v = fundamental_solution(BoundaryValue::limit(lam, Side::plus), s, 1, cfg);
        double m = 0.0;
        for (int n = 0; n <= 10; ++n)
            m = std::max(m, std::abs(v[static_cast<size_t>(n)].value -
                                     std::polar(1.0, -std::numbers::pi * n / 4) / cplx(0.0, -std::sqrt(2.0))));
        return m;
    }, 1e-6);
    check("lap vs eta d=2 lambda=3 xi=(5,0)", [&] {
        const auto f = CompactLatticeFunction::delta(LatticeSite{0, 0});
        const LatticeSite xi{5, 0};
        return std::abs(lap_apply(f, BoundaryValue::limit(3.0, Side::plus), xi, cfg).value -
                        eta_extrapolate(f, 3.0, Side::plus, xi, cfg).value);
    }, 1e-4);
    check("bound state d=1 q=-3", [&] {
        const auto rep = bound_state_scan(CompactLatticeFunction(1, {{LatticeSite{0}, -3.0}}), {}, cfg);
        if (rep.below.size() != 1 || !rep.above.empty()) return 1.0;
        return std::abs(rep.below.front().lambda + std::sqrt(13.0));
    }, 1e-6);
    check("curvature closed form vs projected Hessian", [] {
        const std::vector<double> k{-std::numbers::pi / 3, std::numbers::pi, 0.3};
        return std::abs(total_curvature(k) - projected_curvature(k));
    }, 1e-10);
    return all;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lattice resolvent, limiting absorption and far-field toolkit", "latrad"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--d", g.d, "lattice dimension")->check(CLI::Range(1, 16));
    app.add_option("--lambda", g.lambda, "spectral parameter");
    app.add_option("--side", g.side, "plus (lambda + i0) or minus (lambda - i0)")
        ->check(CLI::IsMember({"plus", "minus"}));
    app.add_option("--config", g.config, "quadrature config JSON");
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--format", g.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));

    int resolution = 256;
    std::string plot;
    auto* surface = app.add_subcommand("surface", "mesh and draw the level set phi(k) = lambda");
    surface->add_option("--resolution", resolution, "base nodes per axis")->check(CLI::Range(2, 1 << 14));
    surface->add_option("--plot", plot, "also write an SVG here");

    std::string fspec = "delta", qspec, method = "lap";
    std::vector<int> xi;
    int window = 0;
    double eta_im = 0.0;
    auto* green = app.add_subcommand("green", "free resolvent values R f at lattice sites");
    green->add_option("--f", fspec, "source: JSON file or shorthand v@c1,c2;...");
    green->add_option("--xi", xi, "site coordinates (repeat d at a time)")->allow_extra_args();
    green->add_option("--window", window, "all sites of the box B_r");
    green->add_option("--method", method, "lap, eta or offspectrum")
        ->check(CLI::IsMember({"lap", "eta", "offspectrum"}));
    green->add_option("--eta-im", eta_im, "imaginary part for a complex eta");

    std::vector<int> dir;
    std::vector<double> radii{10, 20, 30, 40, 50, 60};
    auto* farfield = app.add_subcommand("farfield", "stationary-phase prediction against computed values");
    farfield->add_option("--f", fspec, "source");
    farfield->add_option("--direction", dir, "integer direction (lattice step)")->required();
    farfield->add_option("--radii", radii, "sample radii");

    auto* scatter = app.add_subcommand("scatter", "solution of (Delta + q - lambda) psi = f");
    scatter->add_option("--f", fspec, "source");
    scatter->add_option("--q", qspec, "potential")->required();
    scatter->add_option("--xi", xi, "site coordinates")->allow_extra_args();
    scatter->add_option("--window", window, "all sites of the box B_r");

    auto* s0 = app.add_subcommand("s0", "exceptional set S_0");

    double bs_window = 0.0;
    int bs_grid = 400;
    auto* bound = app.add_subcommand("boundstates", "eigenvalues of Delta + q outside [-2d, 2d]");
    bound->add_option("--q", qspec, "potential")->required();
    bound->add_option("--window", bs_window, "scan width beyond the band edges (default 2 max|q| + 2)");
    bound->add_option("--grid", bs_grid, "scan points per side");

    auto* selftest = app.add_subcommand("selftest", "quick oracle checks");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (surface->parsed()) cmd_surface(g, resolution, plot, out);
        else if (green->parsed()) cmd_green(g, fspec, xi, window, method, eta_im, out);
        else if (farfield->parsed()) cmd_farfield(g, fspec, dir, radii, out);
        else if (scatter->parsed()) cmd_scatter(g, fspec, qspec, xi, window, out);
        else if (s0->parsed()) cmd_s0(g, out);
        else if (bound->parsed()) cmd_boundstates(g, qspec, bs_window, bs_grid, out);
        else if (selftest->parsed()) return cmd_selftest(out) ? exit_ok : exit_selftest_failed;
    } catch (const Error& e) {
        err << "error: " << error_code_name(e.code()) << ": " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_ok;
}

} // namespace latrad::cli

#include "latrad/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latrad/resolvent.hpp"

namespace latrad {

using nlohmann::json;

CompactLatticeFunction function_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("d") || !j.contains("entries"))
            throw Error(ErrorCode::parse_error, "lattice function needs \"d\" and \"entries\"");
        const int d = j.at("d").get<int>();
        if (d < 1) throw Error(ErrorCode::parse_error, "\"d\" must be >= 1");
        CompactLatticeFunction::Map m;
        for (const auto& e : j.at("entries")) {
            auto coords = e.at("site").get<std::vector<int>>();
            if (static_cast<int>(coords.size()) != d)
                throw Error(ErrorCode::dimension_mismatch, "site of dimension " + std::to_string(coords.size()) +
                                                               " in a d = " + std::to_string(d) + " function");
            const double re = e.value("re", 0.0);
            const double im = e.value("im", 0.0);
            LatticeSite s(std::move(coords));
            if (!m.emplace(s, cplx(re, im)).second) {
                std::string where;
                for (int c : s.coords()) where += (where.empty() ? "" : ",") + std::to_string(c);
                throw Error(ErrorCode::duplicate_site, "duplicate site (" + where + ")");
            }
        }
        return CompactLatticeFunction(d, std::move(m));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("bad lattice function JSON: ") + e.what());
    }
}

json function_to_json(const CompactLatticeFunction& f) {
    json entries = json::array();
    for (const auto& [s, v] : f.entries())
        entries.push_back({{"site", std::vector<int>(s.coords().begin(), s.coords().end())},
                           {"re", v.real()},
                           {"im", v.imag()}});
    return {{"d", f.dim()}, {"entries", entries}};
}

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse_error, path + ": " + e.what());
    }
}

double parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::parse_error, "bad number '" + std::string(s) + "'");
    return v;
}

} // namespace

CompactLatticeFunction read_function_file(const std::string& path) {
    return function_from_json(read_json_file(path));
}

CompactLatticeFunction parse_function_shorthand(const std::string& text, int d) {
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    if (text == "delta") return CompactLatticeFunction::delta(LatticeSite::origin(d));
    if (text == "0" || text == "zero" || text.empty()) return CompactLatticeFunction(d);
    CompactLatticeFunction::Map m;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.find_first_not_of(' ') == std::string::npos) continue;
        const auto at = item.find('@');
        if (at == std::string::npos) throw Error(ErrorCode::parse_error, "expected value@site in '" + item + "'");
        const double v = parse_number(std::string_view(item).substr(0, at));
        std::vector<int> coords;
        std::stringstream cs(item.substr(at + 1));
        std::string c;
        while (std::getline(cs, c, ',')) coords.push_back(static_cast<int>(parse_number(c)));
        if (static_cast<int>(coords.size()) == 1 && d > 1 && coords[0] == 0) coords.assign(static_cast<size_t>(d), 0);
        if (static_cast<int>(coords.size()) != d)
            throw Error(ErrorCode::dimension_mismatch, "site '" + item.substr(at + 1) + "' is not " +
                                                           std::to_string(d) + "-dimensional");
        if (!m.emplace(LatticeSite(std::move(coords)), cplx(v, 0.0)).second)
            throw Error(ErrorCode::duplicate_site, "duplicate site in '" + text + "'");
    }
    return CompactLatticeFunction(d, std::move(m));
}

CompactLatticeFunction require_real(const CompactLatticeFunction& q) {
    if (!q.is_real()) throw Error(ErrorCode::invalid_argument, "potential must be real valued");
    return q;
}

CompactLatticeFunction load_function(const std::string& text, int d) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(text, ec)) {
        auto f = read_function_file(text);
        if (f.dim() != d)
            throw Error(ErrorCode::dimension_mismatch, text + " holds a d = " + std::to_string(f.dim()) + " function");
        return f;
    }
    return parse_function_shorthand(text, d);
}

QuadratureConfig config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "config must be a JSON object");
    QuadratureConfig c;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const json& v = it.value();
            if (k == "torus_order") c.torus_order = v.get<int>();
            else if (k == "delta") c.delta = v.get<double>();
            else if (k == "delta_fraction") c.delta_fraction = v.get<double>();
            else if (k == "chi_profile") c.chi_profile = v.get<std::string>();
            else if (k == "rho_order") c.rho_order = v.get<int>();
            else if (k == "surface_resolution") c.surface_resolution = v.get<int>();
            else if (k == "pou_exponent") c.pou_exponent = v.get<int>();
            else if (k == "auto_order") c.auto_order = v.get<bool>();
            else if (k == "check_doubling") c.check_doubling = v.get<bool>();
            else if (k == "ladder_start") c.ladder_start = v.get<double>();
            else if (k == "ladder_halvings") c.ladder_halvings = v.get<int>();
            else if (k == "extrapolation_degree") c.extrapolation_degree = v.get<int>();
            else if (k == "divergence_growth") c.divergence_growth = v.get<double>();
            else if (k == "oracle_abs_tol") c.oracle_abs_tol = v.get<double>();
            else if (k == "oracle_rel_tol") c.oracle_rel_tol = v.get<double>();
            else throw Error(ErrorCode::parse_error, "unknown config key \"" + k + "\"");
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("bad config value: ") + e.what());
    }
    return c;
}

json config_to_json(const QuadratureConfig& c) {
    return {{"torus_order", c.torus_order},
            {"delta", c.delta},
            {"delta_fraction", c.delta_fraction},
            {"chi_profile", c.chi_profile},
            {"rho_order", c.rho_order},
            {"surface_resolution", c.surface_resolution},
            {"pou_exponent", c.pou_exponent},
            {"auto_order", c.auto_order},
            {"check_doubling", c.check_doubling},
            {"ladder_start", c.ladder_start},
            {"ladder_halvings", c.ladder_halvings},
            {"extrapolation_degree", c.extrapolation_degree},
            {"divergence_growth", c.divergence_growth},
            {"oracle_abs_tol", c.oracle_abs_tol},
            {"oracle_rel_tol", c.oracle_rel_tol}};
}

QuadratureConfig read_config_file(const std::string& path) {
    return config_from_json(read_json_file(path));
}

} // namespace latrad

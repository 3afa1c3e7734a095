#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "latrad/error.hpp"
#include "latrad/io.hpp"
#include "latrad/resolvent.hpp"

using namespace latrad;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::invalid_argument;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p;
}

} // namespace

TEST_CASE("function json round trip") {
    const auto f = CompactLatticeFunction(2, {{LatticeSite{0, 0}, cplx(1.0, -0.5)}, {LatticeSite{-3, 2}, 0.25}});
    const auto back = function_from_json(function_to_json(f));
    CHECK(back.dim() == 2);
    CHECK(back.entries() == f.entries());
    const auto parsed = function_from_json(json::parse(R"({"d":1,"entries":[{"site":[4],"re":2}]})"));
    CHECK(parsed(LatticeSite{4}) == cplx(2.0));
}

TEST_CASE("function json errors") {
    CHECK(code_of([] { function_from_json(json::parse(R"({"d":1,"entries":[{"site":[0],"re":1},{"site":[0],"re":2}]})")); }) ==
          ErrorCode::duplicate_site);
    CHECK(code_of([] { function_from_json(json::parse(R"({"d":2,"entries":[{"site":[0],"re":1}]})")); }) ==
          ErrorCode::dimension_mismatch);
    CHECK(code_of([] { function_from_json(json::parse(R"({"entries":[]})")); }) == ErrorCode::parse_error);
    CHECK(code_of([] { function_from_json(json::parse(R"({"d":1,"entries":[{"site":"x"}]})")); }) ==
          ErrorCode::parse_error);
    CHECK(code_of([] { read_function_file("/nonexistent/latrad.json"); }) == ErrorCode::io_error);
}

TEST_CASE("shorthand") {
    const auto f = parse_function_shorthand("0.5@1,2;-3@0,0", 2);
    CHECK(f(LatticeSite{1, 2}) == cplx(0.5));
    CHECK(f(LatticeSite{0, 0}) == cplx(-3.0));
    CHECK(f.support_size() == 2);
    CHECK(parse_function_shorthand("delta", 3).entries() == CompactLatticeFunction::delta(LatticeSite{0, 0, 0}).entries());
    CHECK(parse_function_shorthand("0", 2).empty());
    const auto origin = parse_function_shorthand("-3@0", 2);
    CHECK(origin(LatticeSite{0, 0}) == cplx(-3.0));
    CHECK(code_of([] { parse_function_shorthand("1@0,0;2@0,0", 2); }) == ErrorCode::duplicate_site);
    CHECK(code_of([] { parse_function_shorthand("1@0,0,0", 2); }) == ErrorCode::dimension_mismatch);
    CHECK(code_of([] { parse_function_shorthand("abc", 2); }) == ErrorCode::parse_error);
    CHECK(code_of([] { parse_function_shorthand("x@1", 1); }) == ErrorCode::parse_error);
}

TEST_CASE("files and potentials") {
    const auto p = temp_file("latrad_io_test.json", R"({"d":2,"entries":[{"site":[1,0],"re":0.7,"im":0}]})");
    const auto f = load_function(p.string(), 2);
    CHECK(f(LatticeSite{1, 0}) == cplx(0.7));
    CHECK(code_of([&] { load_function(p.string(), 3); }) == ErrorCode::dimension_mismatch);
    CHECK(require_real(f).support_size() == 1);
    CHECK(code_of([] { require_real(CompactLatticeFunction::delta(LatticeSite{0}, cplx(0, 1))); }) ==
          ErrorCode::invalid_argument);
    std::filesystem::remove(p);
}

TEST_CASE("config json") {
    QuadratureConfig c;
    c.torus_order = 96;
    c.delta = 0.3;
    c.rho_order = 16;
    c.ladder_halvings = 6;
    const auto back = config_from_json(config_to_json(c));
    CHECK(back.torus_order == 96);
    CHECK(back.delta == 0.3);
    CHECK(back.rho_order == 16);
    CHECK(back.ladder_halvings == 6);
    CHECK(back.chi_profile == "smooth");
    CHECK(config_from_json(json::object()).torus_order == 0);
    CHECK(code_of([] { config_from_json(json::parse(R"({"torus_ordr": 10})")); }) == ErrorCode::parse_error);
    CHECK(code_of([] { config_from_json(json::parse(R"({"torus_order": "big"})")); }) == ErrorCode::parse_error);
    const auto p = temp_file("latrad_cfg_test.json", R"({"torus_order": 128, "delta_fraction": 0.4})");
    CHECK(read_config_file(p.string()).delta_fraction == 0.4);
    std::filesystem::remove(p);
}

#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "latrad/lattice.hpp"

namespace latrad {

struct QuadratureConfig;

/// {"d": int, "entries": [{"site": [...], "re": x, "im": y}, ...]}
/// Duplicate sites raise duplicate_site.
CompactLatticeFunction function_from_json(const nlohmann::json& j);
nlohmann::json function_to_json(const CompactLatticeFunction& f);
CompactLatticeFunction read_function_file(const std::string& path);

/// Shorthand "v@c1,c2;v@c1,c2" (entries separated by ';', coordinates by
/// ','). The literal "delta" means the unit mass at the origin. Values are
/// real; complex data goes through JSON.
CompactLatticeFunction parse_function_shorthand(const std::string& text, int d);

/// Potentials must be real: nonzero imaginary parts raise invalid_argument.
CompactLatticeFunction require_real(const CompactLatticeFunction& q);

/// Loads the spec from a file when `text` names an existing file, otherwise
/// parses it as shorthand.
CompactLatticeFunction load_function(const std::string& text, int d);

QuadratureConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const QuadratureConfig& c);
QuadratureConfig read_config_file(const std::string& path);

} // namespace latrad

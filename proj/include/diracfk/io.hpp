#pragma once

#include <string>

#include <json.hpp>

#include "diracfk/geometry.hpp"

namespace diracfk {

/// {"kind": "disk"|"radial"|"conformal", "r0": .., "radial_coeffs": [[a, b], ..],
///  "conformal_coeffs": [[re, im], ..], "center": [x, y]}
nlohmann::json domain_to_json(const Domain& d);
Domain domain_from_json(const nlohmann::json& j);

Domain load_domain(const std::string& path);
void save_domain(const std::string& path, const Domain& d);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// printf %.17g.
std::string fmt17(double v);

}  // namespace diracfk

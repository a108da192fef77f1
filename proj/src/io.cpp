#include "diracfk/io.hpp"

#include <cstdio>
#include <fstream>

namespace diracfk {

using nlohmann::json;

json domain_to_json(const Domain& d) {
  json j;
  j["kind"] = to_string(d.kind());
  switch (d.kind()) {
    case DomainKind::Disk:
      j["r0"] = d.r0();
      break;
    case DomainKind::RadialFourier: {
      j["r0"] = d.r0();
      json coeffs = json::array();
      for (const auto& ab : d.radial_coeffs()) coeffs.push_back({ab[0], ab[1]});
      j["radial_coeffs"] = coeffs;
      break;
    }
    case DomainKind::ConformalPoly: {
      json coeffs = json::array();
      for (const auto& c : d.conformal_coeffs()) coeffs.push_back({c.real(), c.imag()});
      j["conformal_coeffs"] = coeffs;
      break;
    }
  }
  if (d.center() != Vec2{}) j["center"] = {d.center().x, d.center().y};
  return j;
}

namespace {

Vec2 read_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::InvalidDomain, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Domain domain_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidDomain, "domain must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "r0" && key != "radial_coeffs" && key != "conformal_coeffs" &&
        key != "center") {
      throw Error(ErrorKind::InvalidDomain, "unknown domain key '" + key + "'");
    }
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const Vec2 center = j.contains("center") ? read_point(j["center"]) : Vec2{};
    if (kind == "disk") return make_disk(j.value("r0", 1.0), center);
    if (kind == "radial") {
      Domain::RadialCoeffs coeffs;
      for (const auto& ab : j.value("radial_coeffs", json::array())) {
        const Vec2 p = read_point(ab);
        coeffs.push_back({p.x, p.y});
      }
      return make_radial_domain(coeffs, j.at("r0").get<double>(), center);
    }
    if (kind == "conformal") {
      Domain::ConformalCoeffs coeffs;
      for (const auto& c : j.at("conformal_coeffs")) {
        const Vec2 p = read_point(c);
        coeffs.emplace_back(p.x, p.y);
      }
      return make_conformal_domain(coeffs, center);
    }
    throw Error(ErrorKind::InvalidDomain, "unknown domain kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidDomain, e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << j.dump(2) << '\n';
}

Domain load_domain(const std::string& path) { return domain_from_json(read_json_file(path)); }

void save_domain(const std::string& path, const Domain& d) { write_json_file(path, domain_to_json(d)); }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace diracfk

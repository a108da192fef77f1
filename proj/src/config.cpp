#include "diracfk/config.hpp"

#include <set>

#include "diracfk/io.hpp"

namespace diracfk {

using nlohmann::json;

DiscretizationParams SolverConfig::discretization_params() const {
  DiscretizationParams p;
  p.N = N;
  p.eps = eps;
  p.convention = shape_convention_from_string(shape_convention);
  p.boundary_count = M_bnd;
  p.grid_spacing = M_int_h;
  p.seed = repel_seed;
  return p;
}

SolverOptions SolverConfig::solver_options() const {
  SolverOptions o;
  o.accept_tol = accept_tol;
  o.basis_tol = basis_tol;
  o.smooth_basis_tol = smooth_basis_tol;
  return o;
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Config, where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::Config, "unknown key '" + where + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

SolverConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"N", "eps", "M_bnd", "M_int_h", "E_scan", "accept_tol", "trunc_tol", "sweep",
                  "shape_convention", "form_eps", "basis_tol", "smooth_basis_tol", "repel_seed",
                  "form_quadrature"},
                 "");
  SolverConfig c;
  read(j, "N", c.N);
  read(j, "eps", c.eps);
  read(j, "M_bnd", c.M_bnd);
  read(j, "M_int_h", c.M_int_h);
  if (j.contains("E_scan") && !j["E_scan"].is_null()) {
    std::array<double, 3> scan{};
    read(j, "E_scan", scan);
    if (!(scan[0] < scan[1]) || !(scan[2] > 0.0)) {
      throw Error(ErrorKind::Config, "E_scan must be [lo, hi, step] with lo < hi, step > 0");
    }
    c.E_scan = scan;
  }
  read(j, "accept_tol", c.accept_tol);
  read(j, "trunc_tol", c.trunc_tol);
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, {"count", "seed0", "modes", "amplitude"}, "sweep.");
    read(s, "count", c.sweep.count);
    read(s, "seed0", c.sweep.seed0);
    read(s, "modes", c.sweep.modes);
    read(s, "amplitude", c.sweep.amplitude);
  }
  read(j, "shape_convention", c.shape_convention);
  read(j, "form_eps", c.form_eps);
  read(j, "basis_tol", c.basis_tol);
  read(j, "smooth_basis_tol", c.smooth_basis_tol);
  read(j, "repel_seed", c.repel_seed);
  if (j.contains("form_quadrature")) {
    const json& q = j["form_quadrature"];
    reject_unknown(q, {"n_radial", "n_angular", "n_boundary"}, "form_quadrature.");
    read(q, "n_radial", c.form_quadrature.n_radial);
    read(q, "n_angular", c.form_quadrature.n_angular);
    read(q, "n_boundary", c.form_quadrature.n_boundary);
  }

  (void)shape_convention_from_string(c.shape_convention);
  if (c.N < 50) throw Error(ErrorKind::Config, "N must be >= 50");
  if (!(c.eps > 0.0) || !(c.form_eps > 0.0)) throw Error(ErrorKind::Config, "eps must be positive");
  if (c.M_bnd != 0 && c.M_bnd < 16) throw Error(ErrorKind::Config, "M_bnd must be 0 or >= 16");
  if (c.M_int_h < 0.0) throw Error(ErrorKind::Config, "M_int_h must be >= 0");
  if (!(c.accept_tol > 0.0) || !(c.trunc_tol > 0.0)) {
    throw Error(ErrorKind::Config, "tolerances must be positive");
  }
  if (c.sweep.count < 1) throw Error(ErrorKind::Config, "sweep.count must be >= 1");
  if (c.sweep.modes < 0 || c.sweep.modes > 8) throw Error(ErrorKind::Config, "sweep.modes must be in [0, 8]");
  if (c.sweep.amplitude < 0.0 || c.sweep.amplitude > 0.3) {
    throw Error(ErrorKind::Config, "sweep.amplitude must be in [0, 0.3]");
  }
  return c;
}

json to_json(const SolverConfig& c) {
  json j;
  j["N"] = c.N;
  j["eps"] = c.eps;
  j["M_bnd"] = c.M_bnd;
  j["M_int_h"] = c.M_int_h;
  j["E_scan"] = c.E_scan ? json(*c.E_scan) : json(nullptr);
  j["accept_tol"] = c.accept_tol;
  j["trunc_tol"] = c.trunc_tol;
  j["sweep"] = {{"count", c.sweep.count},
                {"seed0", c.sweep.seed0},
                {"modes", c.sweep.modes},
                {"amplitude", c.sweep.amplitude}};
  j["shape_convention"] = c.shape_convention;
  j["form_eps"] = c.form_eps;
  j["basis_tol"] = c.basis_tol;
  j["smooth_basis_tol"] = c.smooth_basis_tol;
  j["repel_seed"] = c.repel_seed;
  j["form_quadrature"] = {{"n_radial", c.form_quadrature.n_radial},
                          {"n_angular", c.form_quadrature.n_angular},
                          {"n_boundary", c.form_quadrature.n_boundary}};
  return j;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::Config, "override must look like key=value: '" + assignment + "'");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::uint64_t config_hash(const SolverConfig& c) {
  json j = to_json(c);
  // Sweep extent does not change any individual record.
  j["sweep"].erase("count");
  j["sweep"].erase("seed0");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SolverConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json j = path.empty() ? json::object() : read_json_file(path);
  for (const auto& o : overrides) apply_override(j, o);
  return config_from_json(j);
}

}  // namespace diracfk

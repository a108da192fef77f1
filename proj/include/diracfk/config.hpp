#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diracfk/dirac_solver.hpp"
#include "diracfk/discretize.hpp"
#include "diracfk/varform.hpp"

namespace diracfk {

struct SweepSettings {
  int count = 100;
  std::uint64_t seed0 = 1;
  int modes = 4;
  double amplitude = 0.2;
};

/// Run configuration. JSON keys match the field names; unknown keys are
/// rejected. Zero for M_bnd / M_int_h selects the defaults N and
/// sqrt(area / (2 N)); a missing E_scan is derived from the domain bounds.
struct SolverConfig {
  int N = 242;
  double eps = 1.5;
  int M_bnd = 0;
  double M_int_h = 0.0;
  std::optional<std::array<double, 3>> E_scan;  // lo, hi, step
  double accept_tol = 1e-4;
  double trunc_tol = 1e-10;
  SweepSettings sweep;

  std::string shape_convention = "width";
  double form_eps = 1.0;
  double basis_tol = 0.0;
  double smooth_basis_tol = 1e-15;
  std::uint64_t repel_seed = 1;
  FormQuadrature form_quadrature;

  DiscretizationParams discretization_params() const;
  SolverOptions solver_options() const;
};

SolverConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolverConfig& c);

/// Applies "a.b=value" to a JSON object; the value is parsed as JSON when
/// possible and taken as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Stable 64-bit digest of the canonical JSON form.
std::uint64_t config_hash(const SolverConfig& c);

SolverConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace diracfk

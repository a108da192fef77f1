#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diracfk/bounds.hpp"
#include "diracfk/config.hpp"
#include "diracfk/dirac_solver.hpp"
#include "diracfk/varform.hpp"

namespace diracfk {

/// r(t) = 1 + sum_{k=2}^{modes+1} (a_k cos kt + b_k sin kt) with a_k, b_k
/// uniform in [-amplitude / k^2, amplitude / k^2], rescaled to area pi.
/// Redraws up to 100 times if r is not positive.
Domain random_domain(std::uint64_t seed, int modes, double amplitude);

/// Scan window for E: the configured one, or one derived from the bounds.
std::array<double, 3> scan_window(const Domain& d, const SolverConfig& cfg);

struct DiracSolution {
  std::shared_ptr<const DiracProblem> problem;
  DiracEigenResult first;
};

DiracSolution solve_dirac(const Domain& d, const SolverConfig& cfg);
DiracSolution solve_dirac(const Domain& d, const SolverConfig& cfg, std::vector<Vec2> centers);

/// Reduced variational forms on the repel centers with the form shape
/// parameter.
ReducedForm variational_form(const Domain& d, const SolverConfig& cfg);
ReducedForm variational_form(const Domain& d, const SolverConfig& cfg,
                             const std::vector<Vec2>& centers);

/// Root of mu in [0.5 sqrt(2 pi / area), 1.2 perimeter / area].
double e1_variational(const Domain& d, const ReducedForm& rf);

struct DiskRefCell {
  double eps = 0.0;
  int N = 0;
  double E = 0.0;
  double error = 0.0;      // |E - disk reference|
  double reference_error = 0.0;  // published error at this (eps, N)
  double seconds = 0.0;
  bool within(double slack = 10.0) const { return error <= slack * reference_error; }
};

/// Unit disk solved at one (eps, N), full basis, other settings from cfg.
DiskRefCell disk_reference_cell(double eps, int N, const SolverConfig& cfg);
/// eps in {5, 10, 15} by N in {242, 323, 402}, row-major.
std::vector<DiskRefCell> disk_reference_table(const SolverConfig& cfg);

struct SpectralRecord {
  std::string domain_id;
  std::uint64_t seed = 0;
  double area = 0.0;
  double perimeter = 0.0;
  double inradius = 0.0;
  double e1_dirac = 0.0;
  double e1_var = 0.0;
  double sigma_min = 0.0;
  double bc_residual = 0.0;
  BoundsReport bounds;
  BoundFlags flags;
  double wall_time_ms = 0.0;

  bool solvers_agree(double tol = 5e-3) const { return std::abs(e1_dirac - e1_var) < tol; }
};

inline constexpr const char* kSweepHeader =
    "domain_id,seed,area,perimeter,inradius,e1_dirac,e1_var,sigma_min,bc_residual,lb_area,"
    "ub_simple,ub_thm12,ub_ecrit,fk_ref,fk_ok,wall_time_ms";

std::string to_csv_row(const SpectralRecord& r);
SpectralRecord record_from_csv_row(const std::string& line);

std::string domain_id(std::uint64_t seed, const SolverConfig& cfg);

/// Both solvers and all bounds for one domain.
SpectralRecord solve_record(const Domain& d, const SolverConfig& cfg, std::uint64_t seed = 0,
                            const std::string& id = "");

struct SweepFailure {
  std::string domain_id;
  std::uint64_t seed = 0;
  std::string error;
};

struct SweepSummary {
  std::vector<SpectralRecord> records;  // every record in the file, by domain_id
  std::vector<SweepFailure> failures;   // from this run
  int computed = 0;
  int skipped = 0;
  int fk_violations = 0;       // e1 < fk_reference - tol
  int bound_violations = 0;    // proven bounds failing at tol
  int solver_disagreements = 0;
  bool min_e1_at_min_perimeter = false;  // within 1 % of the smallest perimeter
};

/// Seeds seed0 .. seed0 + count - 1. Records already present in csv_path are
/// skipped; new ones are appended in domain_id order. jobs <= 0 uses all
/// hardware threads.
SweepSummary run_sweep(const SolverConfig& cfg, const std::string& csv_path, int jobs,
                       double tol = 5e-3);

struct MuComparison {
  std::vector<double> E;
  std::vector<double> disk_mu;
  std::vector<MuCurve> curves;
  std::vector<std::vector<ConjectureRow>> checks;
};

MuComparison mu_comparison(const std::vector<Domain>& domains, const std::vector<double>& E_grid,
                           const SolverConfig& cfg, double tol = 5e-3);
void write_mu_comparison_csv(const std::string& path, const MuComparison& data);

struct FieldReport {
  std::vector<FieldPoint> points;
  Vec2 max_location;
  double max_abs_u1 = 0.0;
  double distance_to_incenter = 0.0;
  double arg_u1_range = 0.0;
  double l2_norm = 0.0;
  double bc_residual = 0.0;
  double E = 0.0;
};

/// Eigenfunction on a uniform grid of spacing h clipped to the domain.
FieldReport eigenfunction_field(const Domain& d, double h, const SolverConfig& cfg);
void write_field_csv(const std::string& path, const FieldReport& f);

}  // namespace diracfk

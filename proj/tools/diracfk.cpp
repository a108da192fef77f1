#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diracfk/bounds.hpp"
#include "diracfk/config.hpp"
#include "diracfk/harness.hpp"
#include "diracfk/io.hpp"
#include "diracfk/kernels.hpp"
#include "diracfk/specfun.hpp"
#include "diracfk/varform.hpp"

namespace fs = std::filesystem;
using namespace diracfk;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitSolver = 3;
constexpr int kExitThreshold = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveRadius:
    case ErrorKind::UnivalenceViolation:
    case ErrorKind::InvalidDomain:
    case ErrorKind::GenerationFailure:
      return kExitDomain;
    case ErrorKind::GridTooCoarse:
    case ErrorKind::RepelFailure:
    case ErrorKind::NoEigenvalueFound:
    case ErrorKind::MassDegenerate:
    case ErrorKind::BadBracket:
      return kExitSolver;
    default:
      return kExitUsage;
  }
}

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  int jobs = 0;
  std::string isa = "auto";
};

SolverConfig prepare(const Common& c) {
  if (c.isa == "scalar") {
    kernels::set_isa(kernels::Isa::Scalar);
  } else if (c.isa == "avx2") {
    kernels::set_isa(kernels::Isa::Avx2);
  } else if (c.isa != "auto") {
    throw Error(ErrorKind::Config, "unknown --isa '" + c.isa + "'");
  }
  SolverConfig cfg = load_config(c.config_path, c.overrides);
  fs::create_directories(c.out_dir);
  write_json_file((fs::path(c.out_dir) / "resolved_config.json").string(), to_json(cfg));
  return cfg;
}

std::string out_path(const Common& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  if (std::sscanf(spec.c_str(), "%lf,%lf,%d", &lo, &hi, &n) != 3 || n < 1 || (n > 1 && !(hi > lo))) {
    throw Error(ErrorKind::InvalidArgument, "grid must be lo,hi,count");
  }
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return g;
}

int cmd_disk_ref(const Common& c) {
  const SolverConfig cfg = prepare(c);
  const auto table = disk_reference_table(cfg);
  auto out = open_out(out_path(c, "disk_ref.csv"));
  out << "eps,N,E,abs_error,reference_error,limit,seconds,ok\n";
  bool ok = true;
  std::printf("reference E1 = %.12f\n%8s %14s %14s %14s\n", kDiskE1, "eps\\N", "242", "323", "402");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& cell = table[i];
    ok = ok && cell.within();
    out << fmt17(cell.eps) << ',' << cell.N << ',' << fmt17(cell.E) << ',' << fmt17(cell.error) << ','
        << fmt17(cell.reference_error) << ',' << fmt17(10.0 * cell.reference_error) << ','
        << fmt17(cell.seconds) << ',' << (cell.within() ? 1 : 0) << '\n';
    if (i % 3 == 0) std::printf("%8g", cell.eps);
    std::printf(" %13.3e%s", cell.error, cell.within() ? " " : "!");
    if (i % 3 == 2) std::printf("\n");
  }
  const bool monotone = table[0].error > table[1].error && table[1].error > table[2].error;
  std::printf("eps=5 trend %s\n", monotone ? "monotone" : "NOT monotone");
  if (!ok) std::printf("cells marked ! exceed 10x the reference error\n");
  return ok ? 0 : kExitThreshold;
}

int cmd_solve(const Common& c, const std::string& domain_file) {
  const SolverConfig cfg = prepare(c);
  const Domain d = load_domain(domain_file);
  const SpectralRecord r = solve_record(d, cfg, 0, fs::path(domain_file).stem().string());
  auto out = open_out(out_path(c, "record.csv"));
  out << kSweepHeader << '\n' << to_csv_row(r) << '\n';
  std::printf("e1_dirac=%s e1_var=%s sigma_min=%.3e bc_residual=%.3e\n", fmt17(r.e1_dirac).c_str(),
              fmt17(r.e1_var).c_str(), r.sigma_min, r.bc_residual);
  std::printf("bounds: lower %s simple %s inradius %s ecrit %s fk %s\n", r.flags.lower ? "ok" : "FAIL",
              r.flags.simple ? "ok" : "FAIL", r.flags.inradius ? "ok" : "FAIL",
              r.flags.ecrit ? "ok" : "FAIL", r.flags.fk ? "ok" : "violated");
  return r.flags.proven_ok() ? 0 : kExitThreshold;
}

int cmd_mu(const Common& c, const std::string& domain_file, std::optional<double> E,
           const std::string& grid) {
  const SolverConfig cfg = prepare(c);
  const Domain d = load_domain(domain_file);
  std::vector<double> Es;
  if (E) {
    Es = {*E};
  } else {
    Es = parse_grid(grid.empty() ? "0,2,21" : grid);
  }
  const ReducedForm rf = variational_form(d, cfg);
  auto out = open_out(out_path(c, "mu.csv"));
  out << "E,mu,n_modes\n";
  for (double e : Es) {
    const MuValue m = mu_of_E(rf, e);
    out << fmt17(e) << ',' << fmt17(m.mu) << ',' << m.n_modes << '\n';
    std::printf("E=%s mu=%s\n", fmt17(e).c_str(), fmt17(m.mu).c_str());
  }
  return 0;
}

int cmd_bounds(const Common& c, const std::string& domain_file, std::optional<double> e1) {
  prepare(c);
  const Domain d = load_domain(domain_file);
  const BoundsReport b = evaluate_bounds(d);
  json j{{"area", d.area()},
         {"perimeter", d.perimeter()},
         {"inradius", d.inradius()},
         {"lower_area", b.lower_area},
         {"upper_simple", b.upper_simple},
         {"upper_inradius", b.upper_inradius},
         {"upper_ecrit", b.upper_ecrit},
         {"fk_reference", b.fk_reference}};
  int code = 0;
  if (e1) {
    const BoundFlags f = check_e1_against_bounds(b, *e1, 5e-3);
    j["e1"] = *e1;
    j["flags"] = {{"lower", f.lower}, {"simple", f.simple}, {"inradius", f.inradius},
                  {"ecrit", f.ecrit}, {"fk", f.fk}};
    if (!f.proven_ok()) code = kExitThreshold;
  }
  write_json_file(out_path(c, "bounds.json"), j);
  std::cout << j.dump(2) << '\n';
  return code;
}

int cmd_sweep(const Common& c) {
  const SolverConfig cfg = prepare(c);
  const SweepSummary s = run_sweep(cfg, out_path(c, "sweep.csv"), c.jobs);
  std::printf("records %zu (computed %d, resumed %d), failures %zu\n", s.records.size(), s.computed,
              s.skipped, s.failures.size());
  std::printf("proven-bound violations %d, faber-krahn violations %d, solver disagreements %d\n",
              s.bound_violations, s.fk_violations, s.solver_disagreements);
  std::printf("minimum e1 at minimum perimeter: %s\n", s.min_e1_at_min_perimeter ? "yes" : "no");
  for (const auto& f : s.failures) std::printf("failed %s: %s\n", f.domain_id.c_str(), f.error.c_str());
  return s.bound_violations == 0 && s.min_e1_at_min_perimeter ? 0 : kExitThreshold;
}

int cmd_fields(const Common& c, const std::string& domain_file, double h) {
  const SolverConfig cfg = prepare(c);
  const Domain d = load_domain(domain_file);
  const FieldReport f = eigenfunction_field(d, h, cfg);
  write_field_csv(out_path(c, "fields.csv"), f);
  std::printf("E=%s points=%zu max|u1| at (%.4f, %.4f), %.4f from the incenter, arg range %.4f\n",
              fmt17(f.E).c_str(), f.points.size(), f.max_location.x, f.max_location.y,
              f.distance_to_incenter, f.arg_u1_range);
  return 0;
}

int cmd_figure4(const Common& c, const std::vector<std::string>& domain_files, int count,
                const std::string& grid) {
  const SolverConfig cfg = prepare(c);
  std::vector<Domain> domains;
  for (const auto& f : domain_files) domains.push_back(load_domain(f));
  if (domains.empty()) {
    for (int i = 0; i < count; ++i) {
      domains.push_back(random_domain(cfg.sweep.seed0 + static_cast<std::uint64_t>(i),
                                      cfg.sweep.modes, cfg.sweep.amplitude));
    }
  }
  const MuComparison data = mu_comparison(domains, parse_grid(grid), cfg);
  write_mu_comparison_csv(out_path(c, "figure4.csv"), data);
  int violations = 0;
  for (const auto& rows : data.checks) {
    for (const auto& r : rows) violations += r.ok ? 0 : 1;
  }
  std::printf("%zu domains, %zu grid points, %d violations of mu >= mu_disk - tol\n", domains.size(),
              data.E.size(), violations);
  return violations == 0 ? 0 : kExitThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal eigenvalue of the two-dimensional Dirac operator with infinite-mass "
               "boundary conditions"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-c,--config", common.config_path, "JSON configuration file");
  app.add_option("-s,--set", common.overrides, "Override a config key, e.g. --set sweep.count=20")
      ->allow_extra_args(false);
  app.add_option("-o,--out", common.out_dir, "Output directory")->capture_default_str();
  app.add_option("-j,--jobs", common.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--isa", common.isa, "Kernel variant: auto, scalar or avx2")->capture_default_str();

  auto* disk_ref = app.add_subcommand("disk-ref", "Unit-disk accuracy table over eps and N");
  auto* solve = app.add_subcommand("solve", "Principal eigenvalue of one domain by both solvers");
  auto* mu = app.add_subcommand("mu", "Variational level mu(E) on a grid");
  auto* bounds = app.add_subcommand("bounds", "Isoperimetric bounds for one domain");
  auto* sweep = app.add_subcommand("sweep", "Random-domain sweep with resume");
  auto* fields = app.add_subcommand("fields", "Eigenfunction modulus and argument on a grid");
  auto* figure4 = app.add_subcommand("figure4", "mu curves of several domains against the disk");

  std::string domain_file;
  for (auto* sub : {solve, mu, bounds, fields}) {
    sub->add_option("domain", domain_file, "Domain JSON file")->required()->check(CLI::ExistingFile);
  }
  std::optional<double> mu_E;
  std::string grid;
  mu->add_option("--E", mu_E, "Single energy");
  mu->add_option("--grid", grid, "lo,hi,count (default 0,2,21)");
  std::optional<double> bounds_e1;
  bounds->add_option("--e1", bounds_e1, "Check this eigenvalue against the bounds");
  double h = 0.05;
  fields->add_option("--spacing", h, "Grid spacing")->capture_default_str();
  std::vector<std::string> fig_domains;
  int fig_count = 3;
  std::string fig_grid = "0,2,20";
  figure4->add_option("--domains", fig_domains, "Domain files (default: random domains)");
  figure4->add_option("--count", fig_count, "Number of random domains")->capture_default_str();
  figure4->add_option("--grid", fig_grid, "lo,hi,count")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*disk_ref) return cmd_disk_ref(common);
    if (*solve) return cmd_solve(common, domain_file);
    if (*mu) return cmd_mu(common, domain_file, mu_E, grid);
    if (*bounds) return cmd_bounds(common, domain_file, bounds_e1);
    if (*sweep) return cmd_sweep(common);
    if (*fields) return cmd_fields(common, domain_file, h);
    if (*figure4) return cmd_figure4(common, fig_domains, fig_count, fig_grid);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "diracfk/harness.hpp"
#include "diracfk/specfun.hpp"

using namespace diracfk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Drops the trailing wall-time column.
std::string without_time(const std::string& row) { return row.substr(0, row.rfind(',')); }

SolverConfig small_config() {
  SolverConfig c;
  c.N = 120;
  return c;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("random domains") {
    const Domain flat = random_domain(3, 4, 0.0);
    CHECK(flat.area() == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(flat.perimeter() == doctest::Approx(2.0 * kPi).epsilon(1e-10));

    const Domain a = random_domain(7, 4, 0.2);
    const Domain b = random_domain(7, 4, 0.2);
    CHECK(a.radial_coeffs() == b.radial_coeffs());
    CHECK(a.r0() == b.r0());
    CHECK(random_domain(8, 4, 0.2).radial_coeffs() != a.radial_coeffs());

    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const Domain d = random_domain(seed, 4, 0.2);
      CHECK(std::abs(d.area() - kPi) < 1e-9);
      CHECK(d.perimeter() >= 2.0 * kPi - 1e-9);
    }
    CHECK_THROWS_AS(random_domain(1, 9, 0.1), Error);
    CHECK_THROWS_AS(random_domain(1, 4, 0.31), Error);
    CHECK_THROWS_AS(random_domain(1, -1, 0.1), Error);
  }

  TEST_CASE("csv rows round trip") {
    SpectralRecord r;
    r.domain_id = "00000000000000ab-0000000042";
    r.seed = 42;
    r.area = kPi;
    r.perimeter = 6.5;
    r.inradius = 0.93;
    r.e1_dirac = 1.4412345678901234;
    r.e1_var = 1.4414;
    r.sigma_min = 3e-7;
    r.bc_residual = 2e-5;
    r.bounds = evaluate_bounds(random_domain(42, 4, 0.2));
    r.flags = check_e1_against_bounds(r.bounds, r.e1_dirac, 5e-3);
    r.wall_time_ms = 1234.5;
    const std::string row = to_csv_row(r);
    const SpectralRecord s = record_from_csv_row(row);
    CHECK(s.domain_id == r.domain_id);
    CHECK(s.seed == 42);
    CHECK(s.e1_dirac == r.e1_dirac);
    CHECK(s.bounds.upper_simple == r.bounds.upper_simple);
    CHECK(s.flags.fk == r.flags.fk);
    CHECK(to_csv_row(s) == row);
    CHECK(std::count(row.begin(), row.end(), ',') == 15);
    CHECK_THROWS_AS(record_from_csv_row("a,b,c"), Error);
  }

  TEST_CASE("domain ids") {
    const SolverConfig c;
    const std::string id = domain_id(17, c);
    CHECK(id.size() == 27);
    CHECK(id.substr(16) == "-0000000017");
    SolverConfig other = c;
    other.eps = 2.0;
    CHECK(domain_id(17, other).substr(0, 16) != id.substr(0, 16));
    CHECK(domain_id(17, c) < domain_id(18, c));
  }

  TEST_CASE("sweep on the disk matches the reference and resumes") {
    TempDir dir("diracfk_sweep_disk");
    SolverConfig c;
    c.sweep.count = 1;
    c.sweep.amplitude = 0.0;
    const std::string csv = dir.file("sweep.csv");
    const SweepSummary first = run_sweep(c, csv, 1);
    REQUIRE(first.records.size() == 1);
    CHECK(first.computed == 1);
    CHECK(first.failures.empty());
    CHECK(std::abs(first.records[0].e1_dirac - disk_e1().e1_disk) < 3e-6);
    CHECK(first.records[0].solvers_agree());
    CHECK(first.bound_violations == 0);
    CHECK(first.min_e1_at_min_perimeter);

    const SweepSummary again = run_sweep(c, csv, 1);
    CHECK(again.computed == 0);
    CHECK(again.skipped == 1);
    CHECK(again.records.size() == 1);
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == kSweepHeader);
  }

  TEST_CASE("sweep output does not depend on the thread count") {
    TempDir dir("diracfk_sweep_jobs");
    SolverConfig c = small_config();
    c.sweep.count = 3;
    run_sweep(c, dir.file("one.csv"), 1);
    run_sweep(c, dir.file("two.csv"), 2);
    const auto a = lines_of(dir.file("one.csv"));
    const auto b = lines_of(dir.file("two.csv"));
    REQUIRE(a.size() == 4);
    REQUIRE(b.size() == 4);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(without_time(a[i]) == without_time(b[i]));
  }

  TEST_CASE("sweep rejects a foreign header") {
    TempDir dir("diracfk_sweep_header");
    std::ofstream(dir.file("bad.csv")) << "x,y\n";
    SolverConfig c = small_config();
    c.sweep.count = 1;
    CHECK_THROWS_AS(run_sweep(c, dir.file("bad.csv"), 1), Error);
  }

  TEST_CASE("sweep logs failures and continues") {
    TempDir dir("diracfk_sweep_fail");
    SolverConfig c = small_config();
    c.sweep.count = 2;
    c.E_scan = std::array<double, 3>{3.0, 3.5, 0.05};
    const std::string csv = dir.file("sweep.csv");
    const SweepSummary s = run_sweep(c, csv, 1);
    CHECK(s.computed == 0);
    CHECK(s.failures.size() == 2);
    CHECK(s.records.empty());
    const auto log = lines_of(csv + ".failures.log");
    REQUIRE(log.size() == 2);
    CHECK(log[0].rfind(domain_id(1, c), 0) == 0);
    CHECK(log[0].find("NoEigenvalueFound") != std::string::npos);
    CHECK(lines_of(csv).size() == 1);
  }

  TEST_CASE("mu curves of the disk coincide with the reference column") {
    TempDir dir("diracfk_mu_comparison");
    const SolverConfig c;
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.2 * i);
    const MuComparison data = mu_comparison({make_disk(1.0)}, grid, c);
    REQUIRE(data.curves.size() == 1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(data.curves[0].samples[k].mu == data.disk_mu[k]);
      CHECK(data.checks[0][k].ok);
    }
    REQUIRE(data.curves[0].e1_root.has_value());
    CHECK(std::abs(*data.curves[0].e1_root - disk_e1().e1_disk) < 5e-3);
    CHECK_THROWS_AS(mu_comparison({make_disk(1.2)}, grid, c), Error);

    write_mu_comparison_csv(dir.file("f4.csv"), data);
    const auto lines = lines_of(dir.file("f4.csv"));
    REQUIRE(lines.size() == grid.size() + 1);
    CHECK(lines[0] == "E,mu_disk,mu_1,rhs_1,ok_1");
  }

  TEST_CASE("disk eigenfunction field") {
    TempDir dir("diracfk_fields");
    const SolverConfig c;
    const FieldReport f = eigenfunction_field(make_disk(1.0), 0.05, c);
    CHECK(f.distance_to_incenter < 0.02);
    CHECK(std::abs(f.l2_norm - 1.0) < 1e-6);
    CHECK(f.bc_residual < 1e-5);
    CHECK(f.arg_u1_range < 1e-3);
    CHECK(f.points.size() > 1000);
    write_field_csv(dir.file("field.csv"), f);
    const auto lines = lines_of(dir.file("field.csv"));
    REQUIRE(lines.size() == f.points.size() + 7);
    CHECK(lines[0].rfind("# E=", 0) == 0);
    CHECK(lines[6] == "x,y,abs_u1,arg_u1,abs_u2,arg_u2");
  }
}

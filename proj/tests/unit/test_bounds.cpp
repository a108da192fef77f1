#include <cmath>

#include <doctest.h>

#include "diracfk/bounds.hpp"
#include "diracfk/harness.hpp"
#include "diracfk/specfun.hpp"

using namespace diracfk;
using cd = std::complex<double>;

TEST_SUITE("bounds") {
  TEST_CASE("unit disk") {
    const BoundsReport b = evaluate_bounds(make_disk(1.0));
    CHECK(b.lower_area == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(b.upper_simple == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(b.upper_inradius - kDiskE1) < 1e-11);
    CHECK(std::abs(b.upper_ecrit - kDiskE1) < 1e-11);
    CHECK(std::abs(b.upper_inradius - b.upper_ecrit) < 1e-12);
    CHECK(std::abs(b.fk_reference - kDiskE1) < 1e-11);
  }

  TEST_CASE("disks of other radii collapse to the scaled eigenvalue") {
    const double e1 = disk_e1().e1_disk;
    for (double rho : {0.3, 1.7, 4.0}) {
      const BoundsReport b = evaluate_bounds(make_disk(rho, {1.0, -2.0}));
      CHECK(b.upper_inradius == doctest::Approx(e1 / rho).epsilon(1e-12));
      CHECK(b.upper_ecrit == doctest::Approx(e1 / rho).epsilon(1e-12));
    }
    CHECK(e1 - 1 >= std::sqrt(2.0) - 1);
  }

  TEST_CASE("area-pi domains share the area bound") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const BoundsReport b = evaluate_bounds(random_domain(seed, 4, 0.25));
      CHECK(b.lower_area == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    }
  }

  TEST_CASE("ordering on perturbed domains") {
    std::vector<Domain> ds{make_conformal_domain({cd(1.0, 0.0), cd(0.1, 0.0)})};
    for (std::uint64_t seed = 1; seed <= 6; ++seed) ds.push_back(random_domain(seed, 5, 0.3));
    for (const Domain& d : ds) {
      const BoundsReport b = evaluate_bounds(d);
      CHECK(std::isfinite(b.upper_ecrit));
      CHECK(b.lower_area < b.upper_ecrit);
      CHECK(b.upper_ecrit <= b.upper_inradius);
      CHECK(b.upper_inradius <= b.upper_simple);
      CHECK(b.lower_area <= b.fk_reference);
      CHECK(b.fk_reference <= b.upper_inradius);
    }
  }

  TEST_CASE("flags") {
    const BoundsReport b = evaluate_bounds(make_disk(1.0));
    const BoundFlags at_e1 = check_e1_against_bounds(b, kDiskE1, 5e-3);
    CHECK(at_e1.proven_ok());
    CHECK(at_e1.fk);
    const BoundFlags low = check_e1_against_bounds(b, 0.5, 5e-3);
    CHECK_FALSE(low.lower);
    const BoundFlags high = check_e1_against_bounds(b, 1.5, 5e-3);
    CHECK_FALSE(high.inradius);
    CHECK_FALSE(high.ecrit);
    CHECK(high.simple);
    CHECK_THROWS_AS(check_e1_against_bounds(b, 0.0, 5e-3), Error);
  }

  TEST_CASE("conjecture check") {
    SolverConfig cfg;
    const ReducedForm disk = variational_form(make_disk(1.0), cfg);
    const auto disk_mu = [&](double E) { return mu_of_E(disk, E).mu; };
    const std::vector<double> Es{0.0, 0.5, 1.0, 1.5, 2.0};

    const auto self = conjecture_mu_check(mu_curve(disk, Es), kPi, disk_mu, 5e-3);
    for (const auto& row : self) {
      CHECK(std::abs(row.lhs - row.rhs) < 1e-12);
      CHECK(row.ok);
    }

    const ReducedForm other = variational_form(random_domain(7, 4, 0.2), cfg);
    const auto rows = conjecture_mu_check(mu_curve(other, {1.0}), kPi, disk_mu, 5e-3);
    CHECK(rows[0].ok);

    // mu of a scaled disk from the unit disk curve
    const double rho = 1.3;
    const ReducedForm big = variational_form(make_disk(rho), cfg);
    for (double E : {0.3, 0.8, 1.2}) {
      CHECK(std::abs(mu_of_E(big, E).mu - disk_mu(rho * E) / (rho * rho)) < 1e-3);
    }
    const auto scaled = conjecture_mu_check(mu_curve(big, {0.3, 0.8}), kPi * rho * rho, disk_mu, 5e-3);
    for (const auto& row : scaled) CHECK(std::abs(row.lhs - row.rhs) < 1e-3);
  }
}

#include <cmath>

#include <doctest.h>

#include "diracfk/bounds.hpp"
#include "diracfk/harness.hpp"
#include "diracfk/specfun.hpp"
#include "diracfk/varform.hpp"

using namespace diracfk;
using cd = std::complex<double>;

namespace {

const ReducedForm& disk_form() {
  static const ReducedForm rf = variational_form(make_disk(1.0), SolverConfig{});
  return rf;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace

TEST_SUITE("varform") {
  TEST_CASE("form matrices are symmetric and the mass is semidefinite") {
    const Domain d = make_radial_domain({{0.0, 0.0}, {0.05, 0.0}}, 1.0);
    Discretization disc;
    disc.centers = repel_centers(d, 80, 1);
    disc.eps = 1.0;
    const FormMatrices fm = assemble_forms(d, disc);
    CHECK(fm.D.rows() == 160);
    for (const Eigen::MatrixXd* m : {&fm.D, &fm.M, &fm.Bd}) {
      CHECK((*m - m->transpose()).cwiseAbs().maxCoeff() <= 1e-13 * m->cwiseAbs().maxCoeff());
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fm.M, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()[0] >= -1e-12 * es.eigenvalues().maxCoeff());
    // constant function: only the mass and boundary terms see it
    const ReducedForm rf = reduce_forms(fm, 1e-10);
    CHECK(rf.n_modes >= 10);
    CHECK(rf.n_modes % 2 == 0);
  }

  TEST_CASE("mass truncation can leave too few modes") {
    Discretization disc;
    disc.centers = repel_centers(make_disk(1.0), 60, 1);
    disc.eps = 5.0;
    const FormMatrices fm = assemble_forms(make_disk(1.0), disc);
    CHECK_THROWS_AS(reduce_forms(fm, 0.5), Error);
    try {
      reduce_forms(fm, 0.5);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MassDegenerate);
    }
  }

  TEST_CASE("disk values of mu") {
    const ReducedForm& rf = disk_form();
    CHECK(std::abs(mu_of_E(rf, kDiskE1).mu) < 5e-3);
    CHECK(std::abs(mu_of_E(rf, 0.0).mu) < 5e-3);
    CHECK(mu_of_E(rf, 0.7).mu > 0.0);
    CHECK(mu_of_E(rf, 2.0).mu < 0.0);
  }

  TEST_CASE("disk root of mu") {
    const ReducedForm& rf = disk_form();
    CHECK(std::abs(e1_from_mu(rf, 1.0, 2.0) - kDiskE1) < 1e-3);
    CHECK_THROWS_AS(e1_from_mu(rf, 1.6, 2.0), Error);
    CHECK_THROWS_AS(e1_from_mu(rf, 2.0, 1.0), Error);
  }

  TEST_CASE("disk radius 1.3: root scales like 1 / radius") {
    const ReducedForm rf = variational_form(make_disk(1.3), SolverConfig{});
    CHECK(std::abs(e1_from_mu(rf, 0.5, 2.0) - kDiskE1 / 1.3) < 1e-3);
  }

  TEST_CASE("mu curve structure") {
    SolverConfig cfg;
    std::vector<Domain> domains{make_disk(1.0), random_domain(1, 4, 0.2), random_domain(2, 4, 0.2)};
    const auto Es = grid(0.0, 2.5, 11);
    for (const Domain& d : domains) {
      const MuCurve c = mu_curve(variational_form(d, cfg), Es);
      REQUIRE(c.samples.size() == Es.size());
      REQUIRE(c.e1_root.has_value());
      double scale = 0.0;
      for (const auto& s : c.samples) scale = std::max(scale, std::abs(s.mu));
      CHECK(std::abs(c.samples[0].mu) < 5e-3);
      for (const auto& s : c.samples) {
        if (s.E > 0.0 && s.E < *c.e1_root) CHECK(s.mu > 0.0);
        if (s.E > *c.e1_root) CHECK(s.mu < 0.0);
      }
      for (std::size_t i = 1; i + 1 < c.samples.size(); ++i) {
        CHECK(c.samples[i + 1].mu - 2 * c.samples[i].mu + c.samples[i - 1].mu <= 1e-3 * scale);
      }
      // mu(E2) <= (E2 / E1) mu(E1) - E2 (E2 - E1) for 0 < E1 < E2
      for (std::size_t i = 1; i < c.samples.size(); ++i) {
        for (std::size_t j = i + 1; j < c.samples.size(); ++j) {
          const double e1 = c.samples[i].E, e2 = c.samples[j].E;
          CHECK(c.samples[j].mu <= e2 / e1 * c.samples[i].mu - e2 * (e2 - e1) + 1e-3);
        }
      }
    }
    CHECK_THROWS_AS(mu_curve(disk_form(), {1.0, 0.5}), Error);
  }

  TEST_CASE("robin comparison") {
    const ReducedForm rf = variational_form(random_domain(4, 4, 0.2), SolverConfig{});
    for (double E : grid(0.1, 2.0, 8)) CHECK(robin_gap(rf, E) >= mu_of_E(rf, E).mu - 1e-3);
  }

  TEST_CASE("gradient descent reaches the eigenvalue level") {
    const ReducedForm& rf = disk_form();
    for (double E : {0.5, kDiskE1}) {
      const DescentResult r = mu_by_descent(rf, E, 1e-12);
      CHECK(r.converged);
      CHECK(r.mu >= mu_of_E(rf, E).mu - 1e-9);
      CHECK(std::abs(r.mu - mu_of_E(rf, E).mu) < 1e-4);
    }
  }

  TEST_CASE("richer trial spaces do not raise mu") {
    const Domain d = random_domain(5, 4, 0.2);
    SolverConfig cfg;
    double prev = INFINITY;
    for (int N : {150, 250, 350}) {
      cfg.N = N;
      const double mu = mu_of_E(variational_form(d, cfg), 1.2).mu;
      CHECK(mu <= prev + 1e-3);
      prev = mu;
    }
  }

  TEST_CASE("transplant bound") {
    const DiskReference ref = disk_e1();
    CHECK(std::abs(transplant_bound(make_conformal_domain({cd(1.0, 0.0)}), ref.e1_disk)) < 1e-10);
    CHECK_THROWS_AS(transplant_bound(make_disk(1.0), 1.0), Error);

    const Domain d = make_conformal_domain({cd(1.0, 0.0), cd(0.1, 0.0)});
    const ReducedForm rf = variational_form(d, SolverConfig{});
    for (double E : grid(0.0, 2.0, 21)) CHECK(mu_of_E(rf, E).mu <= transplant_bound(d, E) + 1e-3);

    // the bound lies below the quadratic whose positive root is the critical value
    const BoundsReport b = evaluate_bounds(d);
    const double denom = kPi * d.inradius() * d.inradius() + d.area();
    const auto quadratic = [&](double E) {
      return (-denom * E * E + d.perimeter() * E + 2 * kPi * ref.e1_disk * (ref.e1_disk - 1)) / denom;
    };
    CHECK(std::abs(quadratic(b.upper_ecrit)) < 1e-12);
    for (double E : grid(0.5, 2.0, 16)) CHECK(transplant_bound(d, E) <= quadratic(E) + 1e-8);
    CHECK(transplant_bound(d, b.upper_ecrit) <= 1e-8);
  }
}

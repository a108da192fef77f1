#include <cmath>
#include <complex>

#include <doctest.h>

#include "diracfk/geometry.hpp"
#include "diracfk/io.hpp"
#include "diracfk/rng.hpp"

using namespace diracfk;
using cd = std::complex<double>;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

Domain random_conformal(CounterRng& rng) {
  Domain::ConformalCoeffs c{cd(1.0, 0.0)};
  double budget = 0.8;
  for (int n = 2; n <= 4; ++n) {
    const double mag = rng.uniform(0.0, budget / n / 2.0);
    const double arg = rng.uniform(0.0, 2 * kPi);
    c.push_back(std::polar(mag, arg));
    budget -= n * mag;
  }
  return make_conformal_domain(c);
}

Domain random_radial(CounterRng& rng) {
  Domain::RadialCoeffs c(5, {0.0, 0.0});
  for (int k = 2; k <= 5; ++k) c[k - 1] = {rng.uniform(-0.2, 0.2) / (k * k), rng.uniform(-0.2, 0.2) / (k * k)};
  return make_radial_domain(c, 1.0);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("unit disk through every family") {
    for (const Domain& d : {make_disk(1.0), make_radial_domain({}, 1.0), make_conformal_domain({cd(1.0, 0.0)})}) {
      CHECK(d.area() == doctest::Approx(kPi).epsilon(1e-12));
      CHECK(d.perimeter() == doctest::Approx(2 * kPi).epsilon(1e-12));
      CHECK(d.inradius() == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(d.incenter().norm() < 1e-6);
    }
  }

  TEST_CASE("scaled and shifted disks") {
    const Domain d = make_disk(2.5, {0.3, -1.0});
    CHECK(area(d) == doctest::Approx(kPi * 6.25).epsilon(1e-13));
    CHECK(perimeter(d) == doctest::Approx(5 * kPi).epsilon(1e-13));
    const auto [r, c] = inradius(d);
    CHECK(r == doctest::Approx(2.5).epsilon(1e-12));
    CHECK((c - Vec2{0.3, -1.0}).norm() < 1e-12);
  }

  TEST_CASE("radial area against a trapezoid oracle") {
    const Domain d = make_radial_domain({{0.0, 0.0}, {0.1, 0.0}}, 1.0);
    CHECK(d.area() == doctest::Approx(kPi * 1.005).epsilon(1e-12));
    double oracle = 0.0;
    const int K = 2000;
    for (int k = 0; k < K; ++k) {
      const double t = 2 * kPi * k / K;
      const double r = 1.0 + 0.1 * std::cos(2 * t);
      oracle += 0.5 * r * r * 2 * kPi / K;
    }
    CHECK(d.area() == doctest::Approx(oracle).epsilon(1e-12));
  }

  TEST_CASE("non-positive radius is rejected") {
    CHECK(kind_of([] { make_radial_domain({{-1.1, 0.0}}, 1.0); }) == ErrorKind::NonPositiveRadius);
    CHECK(kind_of([] { make_disk(0.0); }) == ErrorKind::NonPositiveRadius);
  }

  TEST_CASE("conformal area formula") {
    const Domain d = make_conformal_domain({cd(1.0, 0.0), cd(0.1, 0.0)});
    CHECK(d.area() == doctest::Approx(1.02 * kPi).epsilon(1e-12));
    CHECK(conformal_area_by_quadrature(d) == doctest::Approx(1.02 * kPi).epsilon(1e-8));
    CHECK(kind_of([] { make_conformal_domain({cd(1.0, 0.0), cd(0.6, 0.0)}); }) ==
          ErrorKind::UnivalenceViolation);
  }

  TEST_CASE("containment") {
    const Domain disk = make_disk(1.0);
    CHECK(contains(disk, {0.0, 0.0}));
    CHECK_FALSE(contains(disk, {2.0, 0.0}));
    const Domain conf = make_conformal_domain({cd(1.0, 0.0), cd(0.1, 0.0)});
    const cd w = conf.map(0.5);
    CHECK(contains(conf, {w.real(), w.imag()}));
    CHECK_FALSE(contains(conf, {1.2, 0.0}));
  }

  TEST_CASE("inradius of an elongated radial domain") {
    const Domain d = make_radial_domain({{0.0, 0.0}, {0.2, 0.0}}, 1.0);
    double rmin = INFINITY;
    for (int k = 0; k < 4096; ++k) rmin = std::min(rmin, d.radius_at(2 * kPi * k / 4096));
    CHECK(d.inradius() <= rmin + 1e-6);
    CHECK(d.inradius() >= 0.9 * rmin);

    // Brute-force distance map on a 512 x 512 grid.
    double best = 0.0;
    const int n = 512;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Vec2 p{-1.3 + 2.6 * i / (n - 1), -1.3 + 2.6 * j / (n - 1)};
        if (!d.contains(p)) continue;
        double dist2 = INFINITY;
        for (std::size_t k = 0; k < d.sample_x().size(); k += 2) {
          const double dx = p.x - d.sample_x()[k], dy = p.y - d.sample_y()[k];
          dist2 = std::min(dist2, dx * dx + dy * dy);
        }
        best = std::max(best, std::sqrt(dist2));
      }
    }
    CHECK(d.inradius() >= best - 1e-6);
    CHECK(d.inradius() <= best + 2.6 / (n - 1));
  }

  TEST_CASE("boundary nodes") {
    const auto nodes = boundary_nodes(make_disk(1.0), 4);
    REQUIRE(nodes.size() == 4);
    for (const auto& b : nodes) {
      CHECK(b.point.norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK((b.normal - b.point).norm() < 1e-14);
      CHECK(b.weight == doctest::Approx(kPi / 2).epsilon(1e-14));
    }
    CHECK(std::abs(nodes[0].point.x - 1.0) < 1e-14);
    CHECK(std::abs(nodes[1].point.y - 1.0) < 1e-14);

    CounterRng rng(2);
    for (const Domain& d : {random_radial(rng), random_conformal(rng)}) {
      const auto nb = boundary_nodes(d, 301);
      double sum = 0.0;
      for (const auto& b : nb) {
        sum += b.weight;
        CHECK(d.boundary_distance(b.point) < 1e-12);
        CHECK(b.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
        // outward: a small step along n leaves the domain
        CHECK_FALSE(d.contains(b.point + b.normal * 1e-6));
        CHECK(d.contains(b.point - b.normal * 1e-6));
      }
      CHECK(sum == doctest::Approx(d.perimeter()).epsilon(1e-12));
      // consecutive nodes are equally spaced in arclength
      const double gap0 = (nb[1].point - nb[0].point).norm();
      for (std::size_t i = 1; i + 1 < nb.size(); ++i) {
        CHECK((nb[i + 1].point - nb[i].point).norm() == doctest::Approx(gap0).epsilon(1e-3));
      }
    }
  }

  TEST_CASE("interior grid") {
    const Domain d = make_disk(1.0);
    const auto grid = interior_grid(d, 0.05);
    double w = 0.0;
    for (const auto& p : grid) {
      w += p.weight;
      CHECK(d.contains(p.point));
    }
    CHECK(w >= kPi - 0.35);
    CHECK(w <= kPi);
    CHECK(kind_of([&] { interior_grid(d, 1.0); }) == ErrorKind::GridTooCoarse);
  }

  TEST_CASE("interior quadrature integrates polynomials") {
    CounterRng rng(4);
    for (const Domain& d : {make_disk(1.3, {0.2, 0.1}), random_radial(rng), random_conformal(rng)}) {
      const auto q = interior_quadrature(d, 32, 128);
      double a = 0.0;
      for (const auto& p : q) a += p.weight;
      CHECK(a == doctest::Approx(d.area()).epsilon(1e-10));
    }
  }

  TEST_CASE("scale to area") {
    const Domain d = scale_to_area(make_disk(2.0), kPi);
    CHECK(d.area() == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(d.inradius() == doctest::Approx(1.0).epsilon(1e-12));
    CounterRng rng(6);
    const Domain r = scale_to_area(random_radial(rng), 2.0);
    CHECK(r.area() == doctest::Approx(2.0).epsilon(1e-12));
    const Domain c = scale_to_area(random_conformal(rng), 5.0);
    CHECK(c.area() == doctest::Approx(5.0).epsilon(1e-12));
  }

  TEST_CASE("isoperimetric chain on random domains") {
    CounterRng rng(8);
    for (int k = 0; k < 12; ++k) {
      const Domain d = k % 2 ? random_radial(rng) : random_conformal(rng);
      const double a = d.area(), p = d.perimeter(), ri = d.inradius();
      CHECK(p * p >= 4 * kPi * a * (1 - 1e-12));
      CHECK(p * p > 4 * kPi * a * (1 + 1e-8));
      CHECK(ri <= std::sqrt(a / kPi) + 1e-8);
      CHECK(std::sqrt(a / kPi) <= p / (2 * kPi) + 1e-8);
      if (d.kind() == DomainKind::ConformalPoly) {
        CHECK(conformal_area_by_quadrature(d) == doctest::Approx(a).epsilon(1e-8));
      }
    }
    const Domain disk = make_disk(0.7);
    CHECK(std::abs(disk.perimeter() * disk.perimeter() - 4 * kPi * disk.area()) < 1e-8);
  }

  TEST_CASE("koebe estimate for conformal images") {
    CounterRng rng(10);
    for (int k = 0; k < 10; ++k) {
      const Domain d = random_conformal(rng);
      const double c1 = std::abs(d.conformal_coeffs()[0]);
      // the largest disk centered at f(0) = 0 lies inside, so |f'(0)| bounds its radius
      const double dist0 = d.boundary_distance({0.0, 0.0});
      CHECK(c1 >= dist0 - 1e-6);
      CHECK(dist0 >= c1 / 4 - 1e-6);
    }
    // symmetric images have the incenter at f(0)
    for (double a : {0.02, 0.05}) {
      const Domain d = make_conformal_domain({cd(1.0, 0.0), cd(0.0, 0.0), cd(0.0, 0.0), cd(a, 0.0)});
      CHECK(d.incenter().norm() < 1e-3);
      CHECK(1.0 >= d.inradius() - 1e-6);
    }
  }

  TEST_CASE("json round trip") {
    const auto j = nlohmann::json::parse(R"({"kind": "radial", "r0": 1.0,
        "radial_coeffs": [[0.0, 0.0], [0.1, -0.03], [0.012345678901234567, 0.0]], "center": [0.25, -0.5]})");
    const Domain d = domain_from_json(j);
    CHECK(d.radial_coeffs()[1][0] == 0.1);
    CHECK(d.radial_coeffs()[2][0] == 0.012345678901234567);
    const Domain back = domain_from_json(nlohmann::json::parse(domain_to_json(d).dump()));
    CHECK(back.radial_coeffs() == d.radial_coeffs());
    CHECK(back.center().x == 0.25);
    CHECK(back.area() == d.area());

    const auto jc = nlohmann::json::parse(R"({"kind": "conformal", "conformal_coeffs": [[1, 0], [0.1, 0.05]]})");
    const Domain c = domain_from_json(jc);
    CHECK(domain_from_json(domain_to_json(c)).conformal_coeffs() == c.conformal_coeffs());
    CHECK(kind_of([] { domain_from_json(nlohmann::json::parse(R"({"kind": "disk", "colour": 1})")); }) ==
          ErrorKind::InvalidDomain);
    CHECK(kind_of([] { domain_from_json(nlohmann::json::parse(R"({"kind": "square"})")); }) ==
          ErrorKind::InvalidDomain);
  }
}

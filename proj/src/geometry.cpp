#include "diracfk/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "diracfk/kernels.hpp"
#include "diracfk/optimize.hpp"
#include "diracfk/quadrature.hpp"

namespace diracfk {

namespace {

using cplx = std::complex<double>;

constexpr double kTwoPi = 2.0 * kPi;

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

}  // namespace

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Disk:
      return "disk";
    case DomainKind::RadialFourier:
      return "radial";
    case DomainKind::ConformalPoly:
      return "conformal";
  }
  return "unknown";
}

double Domain::radius_at(double t) const {
  double r = r0_;
  for (std::size_t k = 0; k < radial_.size(); ++k) {
    const double kt = static_cast<double>(k + 1) * t;
    r += radial_[k][0] * std::cos(kt) + radial_[k][1] * std::sin(kt);
  }
  return r;
}

double Domain::radius_derivative_at(double t) const {
  double dr = 0.0;
  for (std::size_t k = 0; k < radial_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    dr += kk * (-radial_[k][0] * std::sin(kk * t) + radial_[k][1] * std::cos(kk * t));
  }
  return dr;
}

cplx Domain::map(cplx z) const {
  cplx sum = 0.0;
  for (std::size_t n = conformal_.size(); n-- > 0;) sum = (sum + conformal_[n]) * z;
  return sum;
}

cplx Domain::map_derivative(cplx z) const {
  cplx sum = 0.0;
  for (std::size_t n = conformal_.size(); n-- > 0;) {
    sum = sum * z + static_cast<double>(n + 1) * conformal_[n];
  }
  return sum;
}

Vec2 Domain::boundary_point(double t) const {
  if (kind_ == DomainKind::ConformalPoly) {
    const cplx w = map(std::polar(1.0, t));
    return center_ + Vec2{w.real(), w.imag()};
  }
  const double r = radius_at(t);
  return center_ + Vec2{r * std::cos(t), r * std::sin(t)};
}

Vec2 Domain::boundary_tangent(double t) const {
  if (kind_ == DomainKind::ConformalPoly) {
    const cplx z = std::polar(1.0, t);
    const cplx w = cplx(0.0, 1.0) * z * map_derivative(z);
    return {w.real(), w.imag()};
  }
  const double r = radius_at(t);
  const double dr = radius_derivative_at(t);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {dr * c - r * s, dr * s + r * c};
}

bool Domain::contains(Vec2 x) const {
  if (kind_ != DomainKind::ConformalPoly) {
    const Vec2 d = x - center_;
    const double rho = d.norm();
    if (rho == 0.0) return true;
    return rho < radius_at(std::atan2(d.y, d.x));
  }
  // Winding number of the sampled boundary polygon around x.
  const auto& bx = cache_->bx;
  const auto& by = cache_->by;
  const std::size_t n = bx.size();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double ax = bx[i] - x.x;
    const double ay = by[i] - x.y;
    const double cx = bx[j] - x.x;
    const double cy = by[j] - x.y;
    const double cross = ax * cy - ay * cx;
    if (ay <= 0.0) {
      if (cy > 0.0 && cross > 0.0) ++winding;
    } else if (cy <= 0.0 && cross < 0.0) {
      --winding;
    }
  }
  return winding != 0;
}

double Domain::nearest_parameter(Vec2 x) const {
  const auto& bx = cache_->bx;
  const auto& by = cache_->by;
  const auto hit = kernels::nearest(x.x, x.y, bx, by);
  const double dt = kTwoPi / static_cast<double>(bx.size());
  const double t0 = static_cast<double>(hit.index) * dt;
  const auto dist2 = [&](double t) {
    const Vec2 d = boundary_point(t) - x;
    return d.dot(d);
  };
  const ScalarMin m = golden_section(dist2, t0 - dt, t0 + dt, 1e-13);
  return wrap_angle(m.x);
}

double Domain::boundary_distance(Vec2 x) const {
  return (boundary_point(nearest_parameter(x)) - x).norm();
}

void Domain::build_cache() {
  auto cache = std::make_shared<Cache>();
  const int K = kBoundarySamples;
  cache->bx.resize(K);
  cache->by.resize(K);
  double speed_sum = 0.0;
  double r2_sum = 0.0;
  for (int k = 0; k < K; ++k) {
    const double t = kTwoPi * k / K;
    const Vec2 p = boundary_point(t);
    cache->bx[k] = p.x;
    cache->by[k] = p.y;
    speed_sum += boundary_tangent(t).norm();
    if (kind_ != DomainKind::ConformalPoly) {
      const double r = radius_at(t);
      r2_sum += r * r;
    }
  }
  cache->perimeter = speed_sum * kTwoPi / K;
  if (kind_ == DomainKind::ConformalPoly) {
    double s = 0.0;
    for (std::size_t n = 0; n < conformal_.size(); ++n) s += (n + 1.0) * std::norm(conformal_[n]);
    cache->area = kPi * s;
  } else {
    cache->area = 0.5 * r2_sum * kTwoPi / K;
  }
  cache_ = cache;

  if (kind_ == DomainKind::ConformalPoly) {
    const double quad = conformal_area_by_quadrature(*this);
    if (std::abs(quad - cache->area) > 1e-8 * cache->area) {
      throw Error(ErrorKind::InvalidDomain, "conformal area formula disagrees with quadrature");
    }
  }

  if (kind_ == DomainKind::Disk) {
    cache->inradius = r0_;
    cache->incenter = center_;
  } else {
    // Coarse grid over the bounding box, then simplex refinement from the
    // best few grid points.
    const auto [xmin, xmax] = std::minmax_element(cache->bx.begin(), cache->bx.end());
    const auto [ymin, ymax] = std::minmax_element(cache->by.begin(), cache->by.end());
    const int G = 64;
    const double hx = (*xmax - *xmin) / G;
    const double hy = (*ymax - *ymin) / G;
    std::vector<std::pair<double, Vec2>> seeds;
    for (int i = 0; i < G; ++i) {
      for (int j = 0; j < G; ++j) {
        const Vec2 p{*xmin + (i + 0.5) * hx, *ymin + (j + 0.5) * hy};
        if (contains(p)) seeds.emplace_back(boundary_distance(p), p);
      }
    }
    if (seeds.empty()) throw Error(ErrorKind::InvalidDomain, "no interior grid point found");
    const std::size_t keep = std::min<std::size_t>(4, seeds.size());
    std::partial_sort(seeds.begin(), seeds.begin() + keep, seeds.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto objective = [this](std::array<double, 2> p) {
      const Vec2 x{p[0], p[1]};
      const double d = boundary_distance(x);
      return contains(x) ? -d : d;
    };
    double best = -1.0;
    Vec2 best_p;
    for (std::size_t s = 0; s < keep; ++s) {
      const Vec2 p = seeds[s].second;
      const SimplexMin m = nelder_mead_2d(objective, {p.x, p.y}, 0.5 * std::min(hx, hy), 1e-10, 2000);
      if (-m.value > best) {
        best = -m.value;
        best_p = {m.x[0], m.x[1]};
      }
    }
    cache->inradius = best;
    cache->incenter = best_p;
  }

  const double a = cache->area;
  const double l = cache->perimeter;
  if (!(a > 0.0) || !(l > 0.0) || !std::isfinite(a) || !std::isfinite(l)) {
    throw Error(ErrorKind::InvalidDomain, "area and perimeter must be positive");
  }
  if (!(cache->inradius > 0.0) || cache->inradius > std::sqrt(a / kPi) * (1.0 + 1e-8)) {
    throw Error(ErrorKind::InvalidDomain, "inradius out of range");
  }
  if (l * l < 4.0 * kPi * a * (1.0 - 1e-9)) {
    throw Error(ErrorKind::InvalidDomain, "isoperimetric inequality violated");
  }
}

Domain make_disk(double radius, Vec2 center) {
  if (!(radius > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "disk radius must be positive");
  Domain d;
  d.kind_ = DomainKind::Disk;
  d.r0_ = radius;
  d.center_ = center;
  d.build_cache();
  return d;
}

Domain make_radial_domain(const Domain::RadialCoeffs& coeffs, double r0, Vec2 center) {
  Domain d;
  d.kind_ = DomainKind::RadialFourier;
  d.r0_ = r0;
  d.radial_ = coeffs;
  d.center_ = center;
  for (const auto& ab : coeffs) {
    if (!std::isfinite(ab[0]) || !std::isfinite(ab[1])) {
      throw Error(ErrorKind::InvalidDomain, "non-finite radial coefficient");
    }
  }
  double rmin = INFINITY;
  for (int k = 0; k < kBoundarySamples; ++k) {
    rmin = std::min(rmin, d.radius_at(kTwoPi * k / kBoundarySamples));
  }
  if (!(rmin > 0.0)) {
    throw Error(ErrorKind::NonPositiveRadius, "r(theta) reaches " + std::to_string(rmin));
  }
  d.build_cache();
  return d;
}

Domain make_conformal_domain(const Domain::ConformalCoeffs& c, Vec2 center) {
  if (c.empty()) throw Error(ErrorKind::UnivalenceViolation, "no conformal coefficients");
  double tail = 0.0;
  for (std::size_t n = 1; n < c.size(); ++n) tail += (n + 1.0) * std::abs(c[n]);
  if (!(std::abs(c[0]) - tail > 0.0)) {
    throw Error(ErrorKind::UnivalenceViolation, "|c1| must exceed sum n|c_n|");
  }
  Domain d;
  d.kind_ = DomainKind::ConformalPoly;
  d.conformal_ = c;
  d.center_ = center;
  d.build_cache();
  return d;
}

double area(const Domain& d) { return d.area(); }
double perimeter(const Domain& d) { return d.perimeter(); }
std::pair<double, Vec2> inradius(const Domain& d) { return {d.inradius(), d.incenter()}; }
bool contains(const Domain& d, Vec2 x) { return d.contains(x); }

double conformal_area_by_quadrature(const Domain& d) {
  const int n = static_cast<int>(d.conformal_coeffs().size());
  const GaussRule rule = gauss_legendre(n + 8, 0.0, 1.0);
  const int nt = 4 * n + 16;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double rho = rule.nodes[i];
    double ring = 0.0;
    for (int j = 0; j < nt; ++j) ring += std::norm(d.map_derivative(std::polar(rho, kTwoPi * j / nt)));
    sum += rule.weights[i] * rho * ring * kTwoPi / nt;
  }
  return sum;
}

std::vector<BoundaryNode> boundary_nodes(const Domain& d, int M, double phase) {
  if (M < 3) throw Error(ErrorKind::InvalidArgument, "boundary_nodes needs M >= 3");
  constexpr int kPanels = 512;
  static const GaussRule unit = gauss_legendre(8, 0.0, 1.0);
  const double dt = kTwoPi / kPanels;
  const auto speed = [&](double t) { return d.boundary_tangent(t).norm(); };
  const auto partial = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
      s += unit.weights[q] * speed(a + (b - a) * unit.nodes[q]);
    }
    return s * (b - a);
  };
  std::vector<double> cum(kPanels + 1, 0.0);
  for (int p = 0; p < kPanels; ++p) cum[p + 1] = cum[p] + partial(p * dt, (p + 1) * dt);
  const double total = cum[kPanels];

  const double weight = d.perimeter() / M;
  std::vector<BoundaryNode> nodes;
  nodes.reserve(M);
  for (int k = 0; k < M; ++k) {
    double s = std::fmod((k + phase) * total / M, total);
    if (s < 0.0) s += total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const int p = std::clamp(static_cast<int>(it - cum.begin()) - 1, 0, kPanels - 1);
    const double ta = p * dt;
    double t = ta + dt * (s - cum[p]) / (cum[p + 1] - cum[p]);
    for (int iter = 0; iter < 20; ++iter) {
      const double step = (cum[p] + partial(ta, t) - s) / speed(t);
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const Vec2 tan = d.boundary_tangent(t);
    const double len = tan.norm();
    nodes.push_back({d.boundary_point(t), Vec2{tan.y / len, -tan.x / len}, weight});
  }
  return nodes;
}

std::vector<WeightedPoint> interior_grid(const Domain& d, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  const auto [xmin, xmax] = std::minmax_element(d.sample_x().begin(), d.sample_x().end());
  const auto [ymin, ymax] = std::minmax_element(d.sample_y().begin(), d.sample_y().end());
  const Vec2 c = d.center();
  const auto lo = [&](double m, double c0) { return static_cast<long>(std::floor((m - c0) / h)); };
  const auto hi = [&](double m, double c0) { return static_cast<long>(std::ceil((m - c0) / h)); };
  std::vector<WeightedPoint> pts;
  for (long j = lo(*ymin, c.y); j <= hi(*ymax, c.y); ++j) {
    for (long i = lo(*xmin, c.x); i <= hi(*xmax, c.x); ++i) {
      const Vec2 p{c.x + i * h, c.y + j * h};
      if (d.contains(p) && d.boundary_distance(p) > 0.5 * h) pts.push_back({p, h * h});
    }
  }
  if (pts.size() < 50) {
    throw Error(ErrorKind::GridTooCoarse,
                std::to_string(pts.size()) + " interior points at h = " + std::to_string(h));
  }
  return pts;
}

std::vector<WeightedPoint> interior_quadrature(const Domain& d, int n_radial, int n_angular) {
  const GaussRule rule = gauss_legendre(n_radial, 0.0, 1.0);
  std::vector<WeightedPoint> pts;
  pts.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  const double dtheta = kTwoPi / n_angular;
  for (int i = 0; i < n_radial; ++i) {
    const double rho = rule.nodes[i];
    for (int j = 0; j < n_angular; ++j) {
      const double t = j * dtheta;
      if (d.kind() == DomainKind::ConformalPoly) {
        const cplx z = std::polar(rho, t);
        const cplx w = d.map(z);
        pts.push_back({d.center() + Vec2{w.real(), w.imag()},
                       rule.weights[i] * rho * std::norm(d.map_derivative(z)) * dtheta});
      } else {
        const double r = d.radius_at(t);
        pts.push_back({d.center() + Vec2{rho * r * std::cos(t), rho * r * std::sin(t)},
                       rule.weights[i] * rho * r * r * dtheta});
      }
    }
  }
  return pts;
}

Domain scale_to_area(const Domain& d, double target) {
  if (!(target > 0.0)) throw Error(ErrorKind::InvalidArgument, "target area must be positive");
  const double s = std::sqrt(target / d.area());
  switch (d.kind()) {
    case DomainKind::Disk:
      return make_disk(d.r0() * s, d.center());
    case DomainKind::RadialFourier: {
      Domain::RadialCoeffs c = d.radial_coeffs();
      for (auto& ab : c) {
        ab[0] *= s;
        ab[1] *= s;
      }
      return make_radial_domain(c, d.r0() * s, d.center());
    }
    case DomainKind::ConformalPoly: {
      Domain::ConformalCoeffs c = d.conformal_coeffs();
      for (auto& cn : c) cn *= s;
      return make_conformal_domain(c, d.center());
    }
  }
  return d;
}

}  // namespace diracfk

#pragma once

#include <array>
#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "diracfk/types.hpp"

namespace diracfk {

enum class DomainKind { Disk, RadialFourier, ConformalPoly };

const char* to_string(DomainKind kind);

struct BoundaryNode {
  Vec2 point;
  Vec2 normal;  // outward, unit length
  double weight = 0.0;
};

struct WeightedPoint {
  Vec2 point;
  double weight = 0.0;
};

/// Immutable smooth simply connected domain.
///
/// Disk / RadialFourier: boundary center + r(t) (cos t, sin t) with
///   r(t) = r0 + sum_k (a_k cos kt + b_k sin kt), k = 1, 2, ...
/// ConformalPoly: boundary center + f(e^{it}), f(z) = sum_{n>=1} c_n z^n.
///
/// Area, perimeter, inradius and a dense boundary sampling are computed once
/// at construction; copies share them.
class Domain {
 public:
  using RadialCoeffs = std::vector<std::array<double, 2>>;
  using ConformalCoeffs = std::vector<std::complex<double>>;

  DomainKind kind() const { return kind_; }
  double r0() const { return r0_; }
  const RadialCoeffs& radial_coeffs() const { return radial_; }
  const ConformalCoeffs& conformal_coeffs() const { return conformal_; }
  Vec2 center() const { return center_; }

  double area() const { return cache_->area; }
  double perimeter() const { return cache_->perimeter; }
  double inradius() const { return cache_->inradius; }
  Vec2 incenter() const { return cache_->incenter; }

  /// Boundary point and its derivative with respect to t in [0, 2 pi).
  Vec2 boundary_point(double t) const;
  Vec2 boundary_tangent(double t) const;

  /// Radial families: r(t) and r'(t).
  double radius_at(double t) const;
  double radius_derivative_at(double t) const;

  /// Conformal family: f(z) and f'(z), without the center shift.
  std::complex<double> map(std::complex<double> z) const;
  std::complex<double> map_derivative(std::complex<double> z) const;

  bool contains(Vec2 x) const;

  /// Distance from x to the boundary curve (unsigned).
  double boundary_distance(Vec2 x) const;
  /// Nearest boundary parameter to x.
  double nearest_parameter(Vec2 x) const;

  /// Dense boundary sampling (structure of arrays) at t_k = 2 pi k / K.
  const std::vector<double>& sample_x() const { return cache_->bx; }
  const std::vector<double>& sample_y() const { return cache_->by; }

  friend Domain make_disk(double radius, Vec2 center);
  friend Domain make_radial_domain(const RadialCoeffs& coeffs, double r0, Vec2 center);
  friend Domain make_conformal_domain(const ConformalCoeffs& c, Vec2 center);

 private:
  struct Cache {
    double area = 0.0;
    double perimeter = 0.0;
    double inradius = 0.0;
    Vec2 incenter;
    std::vector<double> bx;
    std::vector<double> by;
  };

  Domain() = default;
  void build_cache();

  DomainKind kind_ = DomainKind::Disk;
  double r0_ = 1.0;
  RadialCoeffs radial_;
  ConformalCoeffs conformal_;
  Vec2 center_;
  std::shared_ptr<const Cache> cache_;
};

inline constexpr int kBoundarySamples = 4096;

Domain make_disk(double radius = 1.0, Vec2 center = {});
/// Throws NonPositiveRadius when r(t) <= 0 somewhere on the sampling grid.
Domain make_radial_domain(const Domain::RadialCoeffs& coeffs, double r0, Vec2 center = {});
/// Throws UnivalenceViolation unless |c1| > sum_{n>=2} n |c_n|.
Domain make_conformal_domain(const Domain::ConformalCoeffs& c, Vec2 center = {});

double area(const Domain& d);
double perimeter(const Domain& d);
std::pair<double, Vec2> inradius(const Domain& d);
bool contains(const Domain& d, Vec2 x);

/// Jacobian quadrature of the conformal area, independent of the series formula.
double conformal_area_by_quadrature(const Domain& d);

/// M nodes equispaced in arclength starting at arclength offset phase * L / M.
std::vector<BoundaryNode> boundary_nodes(const Domain& d, int M, double phase = 0.0);

/// Cartesian grid with spacing h, keeping points at distance > h/2 from the
/// boundary. Throws GridTooCoarse below 50 points.
std::vector<WeightedPoint> interior_grid(const Domain& d, double h);

/// Polar tensor quadrature: Gauss-Legendre in the radial variable, periodic
/// trapezoid in the angle. Integrates smooth functions over the domain.
std::vector<WeightedPoint> interior_quadrature(const Domain& d, int n_radial, int n_angular);

/// Uniform scaling about the center so that the area equals target.
Domain scale_to_area(const Domain& d, double target);

}  // namespace diracfk

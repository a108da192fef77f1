#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "diracfk/geometry.hpp"

namespace diracfk {

/// How the user-facing shape parameter eps maps onto the kernel scale s in
/// phi(r) = sqrt(1 + (s r)^2).
///   Width: s = 1 / eps, eps is a length (phi ~ sqrt(eps^2 + r^2) / eps).
///   Scale: s = eps.
enum class ShapeConvention { Width, Scale };

const char* to_string(ShapeConvention c);
ShapeConvention shape_convention_from_string(const std::string& name);
double kernel_scale(double eps, ShapeConvention convention);

struct MqValue {
  double value = 0.0;
  Vec2 grad;
};

/// Multiquadric sqrt(1 + (s |x - c|)^2) and its gradient in x.
MqValue multiquadric(double scale, Vec2 c, Vec2 x);

/// Seeded rejection sampling followed by k-nearest-neighbour inverse-square
/// repulsion. Guarantees minimum spacing >= 0.5 sqrt(area / N) or throws
/// RepelFailure.
std::vector<Vec2> repel_centers(const Domain& d, int N, std::uint64_t seed);

double min_spacing(std::span<const Vec2> pts);

struct DiscretizationParams {
  int N = 242;
  double eps = 5.0;
  ShapeConvention convention = ShapeConvention::Width;
  int boundary_count = 0;    // 0: N
  double grid_spacing = 0.0; // 0: sqrt(area / (2 N))
  std::uint64_t seed = 1;
};

struct Discretization {
  std::vector<Vec2> centers;
  double eps = 0.0;
  ShapeConvention convention = ShapeConvention::Width;
  std::vector<WeightedPoint> interior_pts;
  std::vector<BoundaryNode> boundary_pts;
  std::uint64_t seed = 0;

  double scale() const { return kernel_scale(eps, convention); }
};

Discretization discretize(const Domain& d, const DiscretizationParams& p);
/// Same, reusing precomputed centers.
Discretization discretize(const Domain& d, const DiscretizationParams& p, std::vector<Vec2> centers);

/// Basis values and gradients at a point set: rows are points, columns centers.
struct BasisBlock {
  Eigen::MatrixXd value;
  Eigen::MatrixXd d1;
  Eigen::MatrixXd d2;
};

BasisBlock evaluate_basis(double scale, std::span<const Vec2> centers, std::span<const Vec2> points,
                          bool with_gradient = true);

struct CollocationMatrices {
  Eigen::MatrixXd Mint, M1int, M2int;  // interior values, d/dx1, d/dx2
  Eigen::MatrixXd Mbnd, M1bnd, M2bnd;  // boundary values, n1 * value, n2 * value
};

CollocationMatrices collocation_matrices(const Discretization& disc);

std::vector<Vec2> points_of(std::span<const WeightedPoint> pts);
std::vector<Vec2> points_of(std::span<const BoundaryNode> pts);

}  // namespace diracfk

#include "diracfk/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diracfk/kernels.hpp"
#include "diracfk/rng.hpp"

namespace diracfk {

const char* to_string(ShapeConvention c) { return c == ShapeConvention::Width ? "width" : "scale"; }

ShapeConvention shape_convention_from_string(const std::string& name) {
  if (name == "width") return ShapeConvention::Width;
  if (name == "scale") return ShapeConvention::Scale;
  throw Error(ErrorKind::Config, "unknown shape convention '" + name + "'");
}

double kernel_scale(double eps, ShapeConvention convention) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "shape parameter must be positive");
  return convention == ShapeConvention::Width ? 1.0 / eps : eps;
}

MqValue multiquadric(double scale, Vec2 c, Vec2 x) {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "shape parameter must be positive");
  const Vec2 d = x - c;
  const double s2 = scale * scale;
  const double v = std::sqrt(1.0 + s2 * d.dot(d));
  return {v, d * (s2 / v)};
}

double min_spacing(std::span<const Vec2> pts) {
  double best = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, (pts[i] - pts[j]).norm());
  }
  return best;
}

std::vector<Vec2> repel_centers(const Domain& d, int N, std::uint64_t seed) {
  if (N < 50) throw Error(ErrorKind::InvalidArgument, "repel_centers needs N >= 50");
  constexpr int kNeighbours = 8;
  constexpr int kIterations = 200;
  const double spacing = std::sqrt(d.area() / N);
  const double step = 0.05 * spacing;
  const double inset = 1e-3 * spacing;

  const auto [xmin, xmax] = std::minmax_element(d.sample_x().begin(), d.sample_x().end());
  const auto [ymin, ymax] = std::minmax_element(d.sample_y().begin(), d.sample_y().end());
  CounterRng rng(seed);
  std::vector<Vec2> pts;
  pts.reserve(N);
  while (static_cast<int>(pts.size()) < N) {
    const Vec2 p{rng.uniform(*xmin, *xmax), rng.uniform(*ymin, *ymax)};
    if (d.contains(p)) pts.push_back(p);
  }

  const auto pull_inside = [&](Vec2 p) {
    const double t = d.nearest_parameter(p);
    const Vec2 tan = d.boundary_tangent(t);
    const Vec2 inward = Vec2{-tan.y, tan.x} / tan.norm();
    return d.boundary_point(t) + inward * inset;
  };

  std::vector<Vec2> force(N);
  std::vector<std::pair<double, int>> dist(N);
  for (int it = 0; it < kIterations; ++it) {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const Vec2 v = pts[i] - pts[j];
        dist[j] = {i == j ? INFINITY : v.dot(v), j};
      }
      std::partial_sort(dist.begin(), dist.begin() + kNeighbours, dist.end());
      Vec2 f;
      for (int k = 0; k < kNeighbours; ++k) {
        const Vec2 v = pts[i] - pts[dist[k].second];
        const double r = std::sqrt(dist[k].first);
        f = f + v / (r * r * r);
      }
      const double len = f.norm();
      force[i] = len > 0.0 ? f / len : Vec2{};
    }
    for (int i = 0; i < N; ++i) {
      const Vec2 p = pts[i] + force[i] * step;
      pts[i] = d.contains(p) && d.boundary_distance(p) > inset ? p : pull_inside(p);
    }
  }

  const double achieved = min_spacing(pts);
  if (achieved < 0.5 * spacing) {
    throw Error(ErrorKind::RepelFailure, "minimum spacing " + std::to_string(achieved) +
                                             " below target " + std::to_string(0.5 * spacing));
  }
  return pts;
}

std::vector<Vec2> points_of(std::span<const WeightedPoint> pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.point);
  return out;
}

std::vector<Vec2> points_of(std::span<const BoundaryNode> pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.point);
  return out;
}

Discretization discretize(const Domain& d, const DiscretizationParams& p) {
  (void)kernel_scale(p.eps, p.convention);
  return discretize(d, p, repel_centers(d, p.N, p.seed));
}

Discretization discretize(const Domain& d, const DiscretizationParams& p, std::vector<Vec2> centers) {
  Discretization disc;
  disc.eps = p.eps;
  disc.convention = p.convention;
  disc.seed = p.seed;
  (void)kernel_scale(p.eps, p.convention);
  disc.centers = std::move(centers);
  const double h = p.grid_spacing > 0.0 ? p.grid_spacing : std::sqrt(d.area() / (2.0 * p.N));
  disc.interior_pts = interior_grid(d, h);
  const int mb = p.boundary_count > 0 ? p.boundary_count : p.N;
  if (mb < 16) throw Error(ErrorKind::InvalidArgument, "need at least 16 boundary points");
  disc.boundary_pts = boundary_nodes(d, mb);
  if (2 * disc.interior_pts.size() < disc.centers.size()) {
    throw Error(ErrorKind::GridTooCoarse, "fewer interior points than N/2");
  }
  return disc;
}

BasisBlock evaluate_basis(double scale, std::span<const Vec2> centers, std::span<const Vec2> points,
                          bool with_gradient) {
  const auto n_pts = static_cast<Eigen::Index>(points.size());
  const auto n_ctr = static_cast<Eigen::Index>(centers.size());
  std::vector<double> cx(centers.size()), cy(centers.size()), px(points.size()), py(points.size());
  for (std::size_t j = 0; j < centers.size(); ++j) {
    cx[j] = centers[j].x;
    cy[j] = centers[j].y;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    px[i] = points[i].x;
    py[i] = points[i].y;
  }
  BasisBlock b;
  b.value.resize(n_pts, n_ctr);
  if (with_gradient) {
    b.d1.resize(n_pts, n_ctr);
    b.d2.resize(n_pts, n_ctr);
  }
  kernels::MqBlock out{b.value.data(), with_gradient ? b.d1.data() : nullptr,
                       with_gradient ? b.d2.data() : nullptr, n_pts};
  kernels::mq_eval(scale * scale, cx, cy, px, py, out);
  return b;
}

CollocationMatrices collocation_matrices(const Discretization& disc) {
  const double s = disc.scale();
  BasisBlock in = evaluate_basis(s, disc.centers, points_of(disc.interior_pts), true);
  BasisBlock bd = evaluate_basis(s, disc.centers, points_of(disc.boundary_pts), false);
  CollocationMatrices cm;
  cm.Mint = std::move(in.value);
  cm.M1int = std::move(in.d1);
  cm.M2int = std::move(in.d2);
  cm.Mbnd = std::move(bd.value);
  const auto nb = static_cast<Eigen::Index>(disc.boundary_pts.size());
  Eigen::VectorXd n1(nb), n2(nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    n1[i] = disc.boundary_pts[i].normal.x;
    n2[i] = disc.boundary_pts[i].normal.y;
  }
  cm.M1bnd = n1.asDiagonal() * cm.Mbnd;
  cm.M2bnd = n2.asDiagonal() * cm.Mbnd;
  return cm;
}

}  // namespace diracfk

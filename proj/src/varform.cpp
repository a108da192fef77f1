#include "diracfk/varform.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

#include "diracfk/quadrature.hpp"
#include "diracfk/specfun.hpp"

namespace diracfk {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

FormMatrices assemble_forms(const Domain& d, const Discretization& disc, FormQuadrature quad) {
  const auto interior = interior_quadrature(d, quad.n_radial, quad.n_angular);
  const auto boundary = boundary_nodes(d, quad.n_boundary);
  const double s = disc.scale();
  BasisBlock in = evaluate_basis(s, disc.centers, points_of(interior), true);
  BasisBlock bd = evaluate_basis(s, disc.centers, points_of(boundary), false);

  VectorXd wi(static_cast<Index>(interior.size()));
  VectorXd wb(static_cast<Index>(boundary.size()));
  for (Index i = 0; i < wi.size(); ++i) wi[i] = std::sqrt(interior[i].weight);
  for (Index i = 0; i < wb.size(); ++i) wb[i] = std::sqrt(boundary[i].weight);

  FormMatrices fm;
  fm.value = wi.asDiagonal() * in.value;
  fm.grad1 = wi.asDiagonal() * in.d1;
  fm.grad2 = wi.asDiagonal() * in.d2;
  fm.boundary_value = wb.asDiagonal() * bd.value;

  const Index n = fm.value.cols();
  const Index q = fm.value.rows();
  // 2 d/dzbar (v + i w) = (d1 v - d2 w) + i (d2 v + d1 w)
  MatrixXd F(2 * q, 2 * n);
  F << fm.grad1, -fm.grad2, fm.grad2, fm.grad1;
  fm.D.noalias() = F.transpose() * F;
  const MatrixXd VV = fm.value.transpose() * fm.value;
  const MatrixXd BB = fm.boundary_value.transpose() * fm.boundary_value;
  fm.M = MatrixXd::Zero(2 * n, 2 * n);
  fm.Bd = MatrixXd::Zero(2 * n, 2 * n);
  fm.M.topLeftCorner(n, n) = VV;
  fm.M.bottomRightCorner(n, n) = VV;
  fm.Bd.topLeftCorner(n, n) = BB;
  fm.Bd.bottomRightCorner(n, n) = BB;
  return fm;
}

ReducedForm reduce_forms(const FormMatrices& fm, double trunc_tol) {
  // Eigenpairs of the mass block V^T V come from the SVD of V; keep modes
  // whose eigenvalue s^2 exceeds trunc_tol * s_max^2.
  Eigen::BDCSVD<MatrixXd> svd(fm.value, Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  Index k = 0;
  while (k < s.size() && s[k] > 0.0 && s[k] * s[k] > trunc_tol * s[0] * s[0]) ++k;
  if (2 * k < 10) {
    throw Error(ErrorKind::MassDegenerate,
                std::to_string(2 * k) + " mass modes above tolerance " + std::to_string(trunc_tol));
  }
  const MatrixXd T = svd.matrixV().leftCols(k) * s.head(k).cwiseInverse().asDiagonal();
  const MatrixXd g1 = fm.grad1 * T;
  const MatrixXd g2 = fm.grad2 * T;
  const MatrixXd vb = fm.boundary_value * T;
  const MatrixXcd G = g1.cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * g2;

  ReducedForm rf;
  rf.stiffness = G.adjoint() * G;
  rf.boundary = vb.transpose() * vb;
  rf.real_stiffness = g1.transpose() * g1 + g2.transpose() * g2;
  rf.n_modes = static_cast<int>(2 * k);
  return rf;
}

MuValue mu_of_E(const ReducedForm& rf, double E) {
  const MatrixXcd K = rf.stiffness + E * rf.boundary.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(K, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()[0] - E * E, rf.n_modes};
}

MuValue mu_of_E(const FormMatrices& fm, double E, double trunc_tol) {
  return mu_of_E(reduce_forms(fm, trunc_tol), E);
}

double robin_gap(const ReducedForm& rf, double E) {
  const MatrixXd K = rf.real_stiffness + E * rf.boundary;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(K, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0] - E * E;
}

MuCurve mu_curve(const ReducedForm& rf, const std::vector<double>& E_grid) {
  MuCurve curve;
  for (std::size_t i = 0; i < E_grid.size(); ++i) {
    if (E_grid[i] < 0.0 || (i > 0 && E_grid[i] <= E_grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "mu grid must be ascending and nonnegative");
    }
    const MuValue m = mu_of_E(rf, E_grid[i]);
    curve.samples.push_back({E_grid[i], m.mu, m.n_modes});
  }
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    const auto& a = curve.samples[i - 1];
    const auto& b = curve.samples[i];
    if (a.E > 0.0 && a.mu > 0.0 && b.mu <= 0.0) {
      curve.e1_root = b.mu == 0.0 ? b.E : e1_from_mu(rf, a.E, b.E);
      break;
    }
  }
  return curve;
}

double e1_from_mu(const ReducedForm& rf, double E_lo, double E_hi) {
  const auto f = [&](double E) { return mu_of_E(rf, E).mu; };
  const double f_lo = f(E_lo);
  const double f_hi = f(E_hi);
  if (!(E_lo < E_hi) || !(f_lo > 0.0) || !(f_hi < 0.0)) {
    throw Error(ErrorKind::BadBracket, "mu(" + std::to_string(E_lo) + ") = " + std::to_string(f_lo) +
                                           ", mu(" + std::to_string(E_hi) + ") = " +
                                           std::to_string(f_hi));
  }
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, E_lo, E_hi, f_lo, f_hi, [](double x, double y) { return std::abs(y - x) < 1e-8; },
      max_iter);
  return 0.5 * (a + b);
}

DescentResult mu_by_descent(const ReducedForm& rf, double E, double tol, int max_iter) {
  const MatrixXcd K = rf.stiffness + E * rf.boundary.cast<std::complex<double>>();
  const Index n = K.rows();
  VectorXcd c = VectorXcd::Ones(n).normalized();
  const auto quotient = [&](const VectorXcd& x) { return (x.adjoint() * K * x)(0, 0).real(); };
  double rq = quotient(c);
  double step = 1.0 / std::max(1e-300, K.cwiseAbs().rowwise().sum().maxCoeff());
  DescentResult out;
  for (int it = 1; it <= max_iter; ++it) {
    const VectorXcd g = 2.0 * (K * c - rq * c);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) {
      out = {rq - E * E, it, true};
      return out;
    }
    double t = 2.0 * step;
    VectorXcd trial;
    double trial_rq = rq;
    for (int bt = 0; bt < 60; ++bt) {
      trial = (c - t * g).normalized();
      trial_rq = quotient(trial);
      if (trial_rq <= rq - 1e-4 * t * g2) break;
      t *= 0.5;
    }
    step = t;
    const double change = std::abs(trial_rq - rq) / std::max(std::abs(rq), 1e-300);
    c = trial;
    rq = trial_rq;
    if (change < tol) {
      out = {rq - E * E, it, true};
      return out;
    }
  }
  return {rq - E * E, max_iter, false};
}

double transplant_bound(const Domain& d, double E) {
  if (d.kind() != DomainKind::ConformalPoly) {
    throw Error(ErrorKind::InvalidArgument, "transplant bound needs a conformal domain");
  }
  static const DiskReference ref = disk_e1();
  static const GaussRule rule = gauss_legendre(256, 0.0, 1.0);
  const double e1 = ref.e1_disk;
  double j1_int = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double j = bessel_j1(e1 * rule.nodes[i]);
    j1_int += rule.weights[i] * j * j * rule.nodes[i];
  }
  double denom = 0.0;
  const auto& c = d.conformal_coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    const int order = static_cast<int>(n + 1);
    denom += order * std::norm(c[n]) * bessel_moment(order, e1);
  }
  denom *= 2.0 * kPi;
  const double j0sq = ref.j0_at_e1 * ref.j0_at_e1;
  return 2.0 * kPi * e1 * e1 * j1_int / denom - E * E + E * j0sq * d.perimeter() / denom;
}

}  // namespace diracfk

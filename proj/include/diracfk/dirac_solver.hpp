#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "diracfk/discretize.hpp"
#include "diracfk/geometry.hpp"

namespace diracfk {

/// Overdetermined pencil (A - E B) c = 0 in the split-real unknowns
/// c = (alpha1, beta1, alpha2, beta2), u_k = sum_j (alpha_k + i beta_k)_j phi_j.
/// Rows: four interior equation blocks, then two boundary condition blocks.
struct PencilSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::Index n_basis = 0;
  Eigen::Index n_interior = 0;
  Eigen::Index n_boundary = 0;
};

/// Quadrature weights attached to the interior and boundary rows.
struct RowWeights {
  Eigen::VectorXd interior;
  Eigen::VectorXd boundary;
};

/// Interior rows weighted by the grid cell area, boundary rows by the
/// arclength weight times balance^2.
RowWeights row_weights(const Discretization& disc, double balance = 1.0);

/// Rows are scaled by the square roots of the weights.
PencilSystem assemble_pencil(const CollocationMatrices& cm, const RowWeights& w);

struct SigmaInfo {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  Eigen::VectorXd right_vector;  // unit vector attaining sigma_min
  double relative() const { return sigma_max > 0.0 ? sigma_min / sigma_max : 0.0; }
};

/// The same pencil written over complex unknowns (a, b) = (alpha1 + i beta1,
/// alpha2 + i beta2): one row per complex equation. Singular values of the
/// split-real pencil are those of this one, each repeated twice.
struct ComplexPencil {
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
};

ComplexPencil to_complex(const PencilSystem& ps);

/// Extreme singular values of A - E B via Householder QR followed by inverse
/// and power iteration on the triangular factor. The vector is returned in
/// split-real layout.
SigmaInfo pencil_sigma(const PencilSystem& ps, double E, bool want_vector = false);
SigmaInfo pencil_sigma(const ComplexPencil& ps, double E, bool want_vector = false);

/// Smallest singular value of A - E B relative to the largest.
double sigma_min_at(const PencilSystem& ps, double E);

struct SolverOptions {
  /// Relative threshold on the singular values of the stacked weighted
  /// collocation matrix [values; d1; d2; boundary values]. Directions below it
  /// are dropped from the pencil used to refine eigenvalues; 0 keeps all.
  double basis_tol = 0.0;
  /// Threshold for the smaller, numerically smooth subspace used for the
  /// coarse scan and for the eigenfunction coefficients.
  double smooth_basis_tol = 1e-15;
  double accept_tol = 1e-4;
  double refine_tol = 1e-10;
  double boundary_balance = 1.0;
  /// A scan minimum is a candidate when it lies within this factor of the
  /// global scan minimum and this factor below the scan median.
  double candidate_ratio = 10.0;
};

struct DiracEigenResult {
  double E = 0.0;
  Eigen::VectorXd coeffs;  // 4N, unit norm, in the multiquadric basis
  double sigma_min = 0.0;  // relative, on the refinement pencil
  double bc_residual = 0.0;
  /// Coefficients in the smooth orthonormalised basis and the basis itself
  /// (N x r); evaluation goes through these to limit cancellation.
  Eigen::VectorXd reduced;
  std::shared_ptr<const Eigen::MatrixXd> basis;
};

struct ScanPoint {
  double E = 0.0;
  double sigma = 0.0;
};

/// Collocation data for one domain: the raw matrices are orthonormalised
/// column-wise (per basis function) before the pencil is formed.
class DiracProblem {
 public:
  DiracProblem(Domain domain, Discretization disc, SolverOptions opts = {});

  const Domain& domain() const { return domain_; }
  const Discretization& discretization() const { return disc_; }
  const SolverOptions& options() const { return opts_; }
  const PencilSystem& pencil() const { return fine_; }
  const PencilSystem& scan_pencil() const { return coarse_; }
  Eigen::Index basis_rank() const { return fine_.n_basis; }
  Eigen::Index smooth_rank() const { return coarse_.n_basis; }
  const std::shared_ptr<const Eigen::MatrixXd>& smooth_basis() const { return smooth_basis_; }

  double sigma(double E) const { return pencil_sigma(fine_c_, E).relative(); }
  double scan_sigma(double E) const { return pencil_sigma(coarse_c_, E).relative(); }
  /// Smallest singular triplet of the smooth pencil.
  SigmaInfo smooth_sigma_info(double E) const { return pencil_sigma(coarse_c_, E, true); }

 private:
  Domain domain_;
  Discretization disc_;
  SolverOptions opts_;
  PencilSystem fine_;
  PencilSystem coarse_;
  ComplexPencil fine_c_;
  ComplexPencil coarse_c_;
  std::shared_ptr<const Eigen::MatrixXd> smooth_basis_;
};

/// Eigenvalues of the pencil in [E_lo, E_hi] (ascending). Scans the smooth
/// pencil with the given step, refines candidate minima by golden-section
/// search on the full pencil and keeps those below accept_tol. Coefficients
/// are the smallest right singular vector of the smooth pencil at the
/// refined E.
/// Throws NoEigenvalueFound when nothing is accepted.
std::vector<DiracEigenResult> find_eigenvalues(const DiracProblem& prob, double E_lo, double E_hi,
                                               double scan_step,
                                               std::vector<ScanPoint>* scan = nullptr);

/// Pointwise evaluation of a computed eigenfunction, normalised to unit
/// L2 norm with u1 real and positive at the incenter.
class Eigenfunction {
 public:
  Eigenfunction(const DiracEigenResult& res, const DiracProblem& prob);

  struct Value {
    std::complex<double> u1;
    std::complex<double> u2;
  };

  std::vector<Value> evaluate(std::span<const Vec2> pts) const;
  /// L2 norm of (u1, u2) after normalisation, by the polar quadrature.
  double l2_norm() const;
  /// sup |u2 - i n u1| / sup |u| over the given boundary nodes.
  double boundary_residual(std::span<const BoundaryNode> nodes) const;

 private:
  std::vector<Value> evaluate_raw(std::span<const Vec2> pts) const;

  const DiracProblem* prob_;
  Eigen::VectorXd reduced_;
  std::shared_ptr<const Eigen::MatrixXd> basis_;
  std::complex<double> factor_ = 1.0;
};

struct FieldPoint {
  Vec2 point;
  double abs_u1 = 0.0;
  double arg_u1 = 0.0;
  double abs_u2 = 0.0;
  double arg_u2 = 0.0;
};

std::vector<FieldPoint> reconstruct_field(const DiracEigenResult& res, const DiracProblem& prob,
                                          std::span<const Vec2> grid);

}  // namespace diracfk

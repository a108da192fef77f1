#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "diracfk/discretize.hpp"
#include "diracfk/geometry.hpp"

namespace diracfk {

struct FormQuadrature {
  int n_radial = 32;
  int n_angular = 128;
  int n_boundary = 256;
};

/// Discrete quadratic forms over real coefficient pairs (alpha, beta) of
/// u = sum_j (alpha_j + i beta_j) phi_j:
///   D  ~ 4 int |d/dzbar u|^2,  M ~ int |u|^2,  Bd ~ int_boundary |u|^2.
/// The weighted factor matrices (rows: quadrature nodes) are kept so that
/// reductions can work on them directly.
struct FormMatrices {
  Eigen::MatrixXd D;
  Eigen::MatrixXd M;
  Eigen::MatrixXd Bd;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad1;
  Eigen::MatrixXd grad2;
  Eigen::MatrixXd boundary_value;
};

/// Uses the centers and shape parameter of `disc`; its collocation nodes are
/// not needed.
FormMatrices assemble_forms(const Domain& d, const Discretization& disc, FormQuadrature quad = {});

/// Forms restricted to the mass eigenmodes above trunc_tol * (largest) and
/// rewritten in an orthonormal basis of that span, so the mass is the
/// identity. Complex storage: one coefficient per mode.
struct ReducedForm {
  Eigen::MatrixXcd stiffness;       // Hermitian
  Eigen::MatrixXd boundary;         // symmetric
  Eigen::MatrixXd real_stiffness;   // gradient form on real-valued functions
  int n_modes = 0;                  // surviving modes of the 2N x 2N mass matrix
};

/// Throws MassDegenerate when fewer than 10 modes survive.
ReducedForm reduce_forms(const FormMatrices& fm, double trunc_tol);

struct MuValue {
  double mu = 0.0;
  int n_modes = 0;
};

/// Lowest level of q_E = D - E^2 M + E Bd relative to M.
MuValue mu_of_E(const ReducedForm& rf, double E);
MuValue mu_of_E(const FormMatrices& fm, double E, double trunc_tol);

/// lambda_Rob(E) - E^2 from the same forms restricted to real-valued u.
double robin_gap(const ReducedForm& rf, double E);

struct MuSample {
  double E = 0.0;
  double mu = 0.0;
  int n_modes = 0;
};

struct MuCurve {
  std::vector<MuSample> samples;
  std::optional<double> e1_root;
};

/// Samples mu on an ascending grid; the root is located when the samples
/// change sign from positive to non-positive.
MuCurve mu_curve(const ReducedForm& rf, const std::vector<double>& E_grid);

/// Root of E -> mu(E) in a bracket with mu(E_lo) > 0 > mu(E_hi), to 1e-8.
/// Throws BadBracket otherwise.
double e1_from_mu(const ReducedForm& rf, double E_lo, double E_hi);

struct DescentResult {
  double mu = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Steepest descent with Armijo backtracking on the Rayleigh quotient of q_E;
/// stops once the relative change of the quotient drops below tol.
DescentResult mu_by_descent(const ReducedForm& rf, double E, double tol = 1e-10,
                            int max_iter = 200000);

/// Upper bound on mu(E) for a conformal domain from transplanting the disk
/// ground state through the map.
double transplant_bound(const Domain& d, double E);

}  // namespace diracfk

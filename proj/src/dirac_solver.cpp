#include "diracfk/dirac_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "diracfk/optimize.hpp"

namespace diracfk {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

RowWeights row_weights(const Discretization& disc, double balance) {
  RowWeights w;
  w.interior.resize(static_cast<Index>(disc.interior_pts.size()));
  w.boundary.resize(static_cast<Index>(disc.boundary_pts.size()));
  for (Index i = 0; i < w.interior.size(); ++i) w.interior[i] = disc.interior_pts[i].weight;
  for (Index i = 0; i < w.boundary.size(); ++i) {
    w.boundary[i] = disc.boundary_pts[i].weight * balance * balance;
  }
  return w;
}

PencilSystem assemble_pencil(const CollocationMatrices& cm, const RowWeights& w) {
  const Index mi = cm.Mint.rows();
  const Index mb = cm.Mbnd.rows();
  const Index n = cm.Mint.cols();
  PencilSystem ps;
  ps.n_basis = n;
  ps.n_interior = mi;
  ps.n_boundary = mb;
  ps.A = MatrixXd::Zero(4 * mi + 2 * mb, 4 * n);
  ps.B = MatrixXd::Zero(4 * mi + 2 * mb, 4 * n);

  const VectorXd si = w.interior.cwiseSqrt();
  const VectorXd sb = w.boundary.cwiseSqrt();
  const MatrixXd V = si.asDiagonal() * cm.Mint;
  const MatrixXd D1 = si.asDiagonal() * cm.M1int;
  const MatrixXd D2 = si.asDiagonal() * cm.M2int;
  const MatrixXd Vb = sb.asDiagonal() * cm.Mbnd;
  const MatrixXd N1 = sb.asDiagonal() * cm.M1bnd;
  const MatrixXd N2 = sb.asDiagonal() * cm.M2bnd;

  auto a = [&](int row, int col) { return ps.A.block(row * mi, col * n, mi, n); };
  // -2i d/dz u2 = E u1, split into real and imaginary parts
  a(0, 2) = -D2;
  a(0, 3) = D1;
  a(1, 2) = -D1;
  a(1, 3) = -D2;
  // -2i d/dzbar u1 = E u2
  a(2, 0) = D2;
  a(2, 1) = D1;
  a(3, 0) = -D1;
  a(3, 1) = D2;
  // u2 = i n u1 on the boundary
  const Index r0 = 4 * mi;
  ps.A.block(r0, 0, mb, n) = N2;
  ps.A.block(r0, n, mb, n) = N1;
  ps.A.block(r0, 2 * n, mb, n) = Vb;
  ps.A.block(r0 + mb, 0, mb, n) = -N1;
  ps.A.block(r0 + mb, n, mb, n) = N2;
  ps.A.block(r0 + mb, 3 * n, mb, n) = Vb;

  for (int k = 0; k < 4; ++k) ps.B.block(k * mi, k * n, mi, n) = V;
  return ps;
}

ComplexPencil to_complex(const PencilSystem& ps) {
  const Index mi = ps.n_interior;
  const Index mb = ps.n_boundary;
  const Index n = ps.n_basis;
  const Index rows = 2 * mi + mb;
  const std::complex<double> I(0.0, 1.0);
  ComplexPencil c;
  c.A.resize(rows, 2 * n);
  c.B.resize(rows, 2 * n);
  // Real-part rows of each complex equation: interior blocks 0 and 2, then
  // the first boundary block.
  const std::array<std::pair<Index, Index>, 3> src{{{0, mi}, {2 * mi, mi}, {4 * mi, mb}}};
  Index dst = 0;
  for (const auto& [row, len] : src) {
    for (Index k = 0; k < 2; ++k) {
      c.A.block(dst, k * n, len, n) =
          ps.A.block(row, 2 * k * n, len, n).cast<std::complex<double>>() -
          I * ps.A.block(row, (2 * k + 1) * n, len, n).cast<std::complex<double>>();
      c.B.block(dst, k * n, len, n) =
          ps.B.block(row, 2 * k * n, len, n).cast<std::complex<double>>() -
          I * ps.B.block(row, (2 * k + 1) * n, len, n).cast<std::complex<double>>();
    }
    dst += len;
  }
  return c;
}

namespace {

// Golub-Kahan-Lanczos bidiagonalisation with full reorthogonalisation; the
// top singular value of the small bidiagonal converges in a few dozen steps
// even when the leading singular values are clustered.
template <typename Matrix>
double largest_singular_value(const Matrix& R,
                              const Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>& start) {
  using Vector = Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>;
  const Index n = R.cols();
  const Index k_max = std::min<Index>(n, 80);
  Matrix U(R.rows(), k_max), V(n, k_max);
  MatrixXd Bk = MatrixXd::Zero(k_max + 1, k_max);
  V.col(0) = start.normalized();
  double estimate = 0.0;
  for (Index j = 0; j < k_max; ++j) {
    Vector u = R * V.col(j);
    if (j > 0) u -= Bk(j, j - 1) * U.col(j - 1);
    u -= U.leftCols(j) * (U.leftCols(j).adjoint() * u);
    const double alpha = u.norm();
    Bk(j, j) = alpha;
    if (alpha == 0.0) break;
    U.col(j) = u / alpha;
    Vector v = R.adjoint() * U.col(j) - alpha * V.col(j);
    v -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * v);
    const double beta = v.norm();
    if ((j + 1) % 5 == 0 || beta == 0.0 || j + 1 == k_max) {
      Bk(j + 1, j) = beta;
      const double s = Eigen::JacobiSVD<MatrixXd>(Bk.topLeftCorner(j + 2, j + 1)).singularValues()[0];
      const bool settled = std::abs(s - estimate) <= 1e-13 * s;
      estimate = s;
      if (settled || beta == 0.0) break;
    }
    if (j + 1 < k_max) {
      Bk(j + 1, j) = beta;
      V.col(j + 1) = v / beta;
    }
  }
  return estimate;
}

template <typename Matrix>
SigmaInfo triangular_sigma(const Matrix& K, bool want_vector, Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>* vec) {
  using Vector = Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>;
  const Index n = K.cols();
  Eigen::HouseholderQR<Matrix> qr(K);
  const Matrix R = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  const auto Rt = R.template triangularView<Eigen::Upper>();

  SigmaInfo info;
  Vector x(n);
  for (Index j = 0; j < n; ++j) x[j] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(j));
  x.normalize();
  info.sigma_max = largest_singular_value<Matrix>(R, x);

  if ((R.diagonal().array() == typename Matrix::Scalar(0.0)).any()) {
    info.sigma_min = 0.0;
    if (want_vector) {
      *vec = Vector::Zero(n);
      for (Index j = 0; j < n; ++j) {
        if (R(j, j) == typename Matrix::Scalar(0.0)) {
          (*vec)[j] = 1.0;
          break;
        }
      }
    }
    return info;
  }

  for (Index j = 0; j < n; ++j) x[j] = 1.0 + 0.5 * std::cos(1.0 + static_cast<double>(j));
  x.normalize();
  double prev = INFINITY;
  for (int it = 0; it < 200; ++it) {
    Vector z = Rt.adjoint().solve(x);
    z = Rt.solve(z);
    const double nz = z.norm();
    x = z / nz;
    const double est = 1.0 / std::sqrt(nz);
    if (std::abs(est - prev) <= 1e-12 * est) break;
    prev = est;
  }
  info.sigma_min = (R * x).norm();
  if (want_vector) *vec = x;
  return info;
}

}  // namespace

SigmaInfo pencil_sigma(const PencilSystem& ps, double E, bool want_vector) {
  VectorXd v;
  SigmaInfo info = triangular_sigma<MatrixXd>(ps.A - E * ps.B, want_vector, &v);
  if (want_vector) info.right_vector = std::move(v);
  return info;
}

SigmaInfo pencil_sigma(const ComplexPencil& ps, double E, bool want_vector) {
  Eigen::VectorXcd v;
  SigmaInfo info = triangular_sigma<Eigen::MatrixXcd>(ps.A - E * ps.B, want_vector, &v);
  if (want_vector) {
    const Index n = v.size() / 2;
    info.right_vector.resize(4 * n);
    info.right_vector << v.head(n).real(), v.head(n).imag(), v.tail(n).real(), v.tail(n).imag();
  }
  return info;
}

double sigma_min_at(const PencilSystem& ps, double E) { return pencil_sigma(ps, E).relative(); }

namespace {

// Restricts collocation matrices to the leading r left singular directions
// of the weighted stack [values; d1; d2; boundary values].
CollocationMatrices reduced_matrices(const MatrixXd& U, Index r, const RowWeights& w,
                                     const Discretization& disc) {
  const Index mi = w.interior.size();
  const Index mb = w.boundary.size();
  const VectorXd isi = w.interior.cwiseSqrt().cwiseInverse();
  const VectorXd isb = w.boundary.cwiseSqrt().cwiseInverse();
  CollocationMatrices red;
  red.Mint = isi.asDiagonal() * U.block(0, 0, mi, r);
  red.M1int = isi.asDiagonal() * U.block(mi, 0, mi, r);
  red.M2int = isi.asDiagonal() * U.block(2 * mi, 0, mi, r);
  red.Mbnd = isb.asDiagonal() * U.block(3 * mi, 0, mb, r);
  VectorXd n1(mb), n2(mb);
  for (Index i = 0; i < mb; ++i) {
    n1[i] = disc.boundary_pts[i].normal.x;
    n2[i] = disc.boundary_pts[i].normal.y;
  }
  red.M1bnd = n1.asDiagonal() * red.Mbnd;
  red.M2bnd = n2.asDiagonal() * red.Mbnd;
  return red;
}

}  // namespace

DiracProblem::DiracProblem(Domain domain, Discretization disc, SolverOptions opts)
    : domain_(std::move(domain)), disc_(std::move(disc)), opts_(opts) {
  const CollocationMatrices cm = collocation_matrices(disc_);
  const RowWeights w = row_weights(disc_, opts_.boundary_balance);
  const Index mi = cm.Mint.rows();
  const Index mb = cm.Mbnd.rows();
  const Index n = cm.Mint.cols();

  MatrixXd stack(3 * mi + mb, n);
  const VectorXd si = w.interior.cwiseSqrt();
  stack.topRows(mi) = si.asDiagonal() * cm.Mint;
  stack.middleRows(mi, mi) = si.asDiagonal() * cm.M1int;
  stack.middleRows(2 * mi, mi) = si.asDiagonal() * cm.M2int;
  stack.bottomRows(mb) = w.boundary.cwiseSqrt().asDiagonal() * cm.Mbnd;

  Eigen::JacobiSVD<MatrixXd> svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  const auto rank_at = [&](double tol) {
    Index r = 0;
    while (r < s.size() && s[r] > 0.0 && s[r] > tol * s[0]) ++r;
    return r;
  };
  const Index r_fine = rank_at(opts_.basis_tol);
  const Index r_coarse = std::min(rank_at(opts_.smooth_basis_tol), r_fine);
  if (r_coarse < 2) throw Error(ErrorKind::InvalidArgument, "collocation basis is degenerate");

  const MatrixXd& U = svd.matrixU();
  fine_ = assemble_pencil(reduced_matrices(U, r_fine, w, disc_), w);
  coarse_ = assemble_pencil(reduced_matrices(U, r_coarse, w, disc_), w);
  fine_c_ = to_complex(fine_);
  coarse_c_ = to_complex(coarse_);
  MatrixXd T = svd.matrixV().leftCols(r_coarse) * s.head(r_coarse).cwiseInverse().asDiagonal();
  smooth_basis_ = std::make_shared<const MatrixXd>(std::move(T));
}

std::vector<DiracEigenResult> find_eigenvalues(const DiracProblem& prob, double E_lo, double E_hi,
                                               double scan_step, std::vector<ScanPoint>* scan) {
  if (!(E_lo < E_hi) || !(scan_step > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "scan needs E_lo < E_hi and a positive step");
  }
  const SolverOptions& opts = prob.options();
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((E_hi - E_lo) / scan_step + 1e-9));
  for (long k = 0; k <= count; ++k) grid.push_back(E_lo + static_cast<double>(k) * scan_step);
  if (grid.back() < E_hi - 1e-12) grid.push_back(E_hi);
  if (grid.size() < 3) throw Error(ErrorKind::InvalidArgument, "scan grid needs three points");

  std::vector<double> sig(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) sig[k] = prob.scan_sigma(grid[k]);
  if (scan) {
    scan->clear();
    for (std::size_t k = 0; k < grid.size(); ++k) scan->push_back({grid[k], sig[k]});
  }

  std::vector<double> sorted = sig;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double global_min = *std::min_element(sig.begin(), sig.end());

  const auto& basis = prob.smooth_basis();
  const Index n = basis->rows();
  const Index r = basis->cols();
  const auto fresh = boundary_nodes(prob.domain(),
                                    4 * static_cast<int>(prob.discretization().boundary_pts.size()), 0.5);

  std::vector<DiracEigenResult> out;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    if (sig[k] > sig[k - 1] || sig[k] > sig[k + 1]) continue;
    if (sig[k] > opts.candidate_ratio * global_min) continue;
    if (sig[k] * opts.candidate_ratio > median) continue;
    double lo = grid[k - 1];
    double hi = grid[k + 1];
    if (prob.smooth_rank() < prob.basis_rank()) {
      // Locate the minimum on the scan pencil first, then bracket it tightly
      // on the fine pencil before the expensive golden-section search.
      const ScalarMin rough =
          golden_section([&](double E) { return prob.scan_sigma(E); }, lo, hi, 1e-9);
      const double centre_value = prob.sigma(rough.x);
      for (double w = 1e-4 * std::max(1.0, std::abs(rough.x)); w < hi - lo; w *= 4.0) {
        if (prob.sigma(rough.x - w) > centre_value && prob.sigma(rough.x + w) > centre_value) {
          lo = std::max(lo, rough.x - w);
          hi = std::min(hi, rough.x + w);
          break;
        }
      }
    }
    const ScalarMin m = golden_section([&](double E) { return prob.sigma(E); }, lo, hi,
                                       opts.refine_tol);
    if (!(m.value < opts.accept_tol)) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const DiracEigenResult& e) {
      return std::abs(e.E - m.x) < 1e-8;
    });
    if (duplicate) continue;

    const SigmaInfo info = prob.smooth_sigma_info(m.x);
    DiracEigenResult res;
    res.E = m.x;
    res.sigma_min = m.value;
    res.reduced = info.right_vector;
    res.basis = basis;
    res.coeffs.resize(4 * n);
    for (Index b = 0; b < 4; ++b) res.coeffs.segment(b * n, n) = *basis * res.reduced.segment(b * r, r);
    res.coeffs.normalize();
    res.bc_residual = Eigenfunction(res, prob).boundary_residual(fresh);
    out.push_back(std::move(res));
  }
  if (out.empty()) {
    throw Error(ErrorKind::NoEigenvalueFound, "no accepted minimum of sigma in [" +
                                                  std::to_string(E_lo) + ", " +
                                                  std::to_string(E_hi) + "]");
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.E < b.E; });
  return out;
}

Eigenfunction::Eigenfunction(const DiracEigenResult& res, const DiracProblem& prob)
    : prob_(&prob), reduced_(res.reduced), basis_(res.basis) {
  const Vec2 c = prob.domain().incenter();
  const auto at_center = evaluate_raw(std::span<const Vec2>(&c, 1));
  const std::complex<double> z = at_center[0].u1;
  const std::complex<double> phase = std::abs(z) > 0.0 ? std::conj(z) / std::abs(z) : 1.0;

  const auto quad = interior_quadrature(prob.domain(), 32, 128);
  const auto vals = evaluate_raw(points_of(quad));
  double norm2 = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    norm2 += quad[i].weight * (std::norm(vals[i].u1) + std::norm(vals[i].u2));
  }
  factor_ = phase / std::sqrt(norm2);
}

std::vector<Eigenfunction::Value> Eigenfunction::evaluate_raw(std::span<const Vec2> pts) const {
  const Discretization& disc = prob_->discretization();
  const MatrixXd P = evaluate_basis(disc.scale(), disc.centers, pts, false).value * *basis_;
  const Index r = basis_->cols();
  const VectorXd a1 = P * reduced_.segment(0, r);
  const VectorXd b1 = P * reduced_.segment(r, r);
  const VectorXd a2 = P * reduced_.segment(2 * r, r);
  const VectorXd b2 = P * reduced_.segment(3 * r, r);
  std::vector<Value> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto ii = static_cast<Index>(i);
    out[i] = {{a1[ii], b1[ii]}, {a2[ii], b2[ii]}};
  }
  return out;
}

std::vector<Eigenfunction::Value> Eigenfunction::evaluate(std::span<const Vec2> pts) const {
  auto out = evaluate_raw(pts);
  for (auto& v : out) {
    v.u1 *= factor_;
    v.u2 *= factor_;
  }
  return out;
}

double Eigenfunction::l2_norm() const {
  const auto quad = interior_quadrature(prob_->domain(), 48, 192);
  const auto vals = evaluate(points_of(quad));
  double norm2 = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    norm2 += quad[i].weight * (std::norm(vals[i].u1) + std::norm(vals[i].u2));
  }
  return std::sqrt(norm2);
}

double Eigenfunction::boundary_residual(std::span<const BoundaryNode> nodes) const {
  const auto vals = evaluate(points_of(nodes));
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::complex<double> n(nodes[i].normal.x, nodes[i].normal.y);
    worst = std::max(worst, std::abs(vals[i].u2 - std::complex<double>(0.0, 1.0) * n * vals[i].u1));
    scale = std::max({scale, std::abs(vals[i].u1), std::abs(vals[i].u2)});
  }
  return scale > 0.0 ? worst / scale : worst;
}

std::vector<FieldPoint> reconstruct_field(const DiracEigenResult& res, const DiracProblem& prob,
                                          std::span<const Vec2> grid) {
  const Eigenfunction ef(res, prob);
  const auto vals = ef.evaluate(grid);
  std::vector<FieldPoint> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = {grid[i], std::abs(vals[i].u1), std::arg(vals[i].u1), std::abs(vals[i].u2),
              std::arg(vals[i].u2)};
  }
  return out;
}

}  // namespace diracfk

#include "diracfk/bounds.hpp"

#include <cmath>

#include "diracfk/specfun.hpp"

namespace diracfk {

BoundsReport evaluate_bounds(const Domain& d) {
  static const double e1 = disk_e1().e1_disk;
  const double a = d.area();
  const double p = d.perimeter();
  const double ri = d.inradius();
  const double denom = kPi * ri * ri + a;
  BoundsReport r;
  r.lower_area = std::sqrt(2.0 * kPi / a);
  r.upper_simple = p / a;
  r.upper_inradius = p * e1 / denom;
  r.upper_ecrit = (p + std::sqrt(p * p + 8.0 * kPi * e1 * (e1 - 1.0) * denom)) / (2.0 * denom);
  r.fk_reference = std::sqrt(kPi / a) * e1;
  return r;
}

BoundFlags check_e1_against_bounds(const BoundsReport& report, double e1, double tol) {
  if (!(e1 > 0.0)) throw Error(ErrorKind::InvalidArgument, "eigenvalue must be positive");
  BoundFlags f;
  f.lower = report.lower_area - tol <= e1;
  f.simple = e1 <= report.upper_simple + tol;
  f.inradius = e1 <= report.upper_inradius + tol;
  f.ecrit = e1 <= report.upper_ecrit + tol;
  f.fk = e1 >= report.fk_reference - tol;
  return f;
}

std::vector<ConjectureRow> conjecture_mu_check(const MuCurve& domain_curve, double area,
                                               const std::function<double(double)>& disk_mu,
                                               double tol) {
  const double s = std::sqrt(area / kPi);
  std::vector<ConjectureRow> rows;
  for (const auto& sample : domain_curve.samples) {
    const double rhs = disk_mu(s * sample.E) / (s * s);
    rows.push_back({sample.E, sample.mu, rhs, sample.mu >= rhs - tol});
  }
  return rows;
}

}  // namespace diracfk

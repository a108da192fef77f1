#pragma once

#include <functional>
#include <vector>

#include "diracfk/geometry.hpp"
#include "diracfk/varform.hpp"

namespace diracfk {

struct BoundsReport {
  double lower_area = 0.0;    // sqrt(2 pi / area)
  double upper_simple = 0.0;  // perimeter / area
  double upper_inradius = 0.0;   // perimeter E1(D) / (pi r_i^2 + area)
  double upper_ecrit = 0.0;   // positive root of the quadratic bound
  double fk_reference = 0.0;  // sqrt(pi / area) E1(D)
};

struct BoundFlags {
  bool lower = false;
  bool simple = false;
  bool inradius = false;
  bool ecrit = false;
  bool fk = false;  // conjectured lower bound; reported, never fatal
  bool proven_ok() const { return lower && simple && inradius && ecrit; }
};

BoundsReport evaluate_bounds(const Domain& d);
BoundFlags check_e1_against_bounds(const BoundsReport& report, double e1, double tol);

struct ConjectureRow {
  double E = 0.0;
  double lhs = 0.0;  // mu of the domain
  double rhs = 0.0;  // rescaled disk value
  bool ok = false;
};

/// Compares mu_Omega(E) with (pi / area) mu_D(sqrt(area / pi) E) at every
/// sample of the domain curve.
std::vector<ConjectureRow> conjecture_mu_check(const MuCurve& domain_curve, double area,
                                               const std::function<double(double)>& disk_mu,
                                               double tol);

}  // namespace diracfk

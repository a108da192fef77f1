#pragma once

#include <complex>
#include <utility>

#include "diracfk/types.hpp"

namespace diracfk {

/// Principal eigenvalue of the unit disk, used as the reference constant.
inline constexpr double kDiskE1 = 1.434695650819;

/// Bessel functions of the first kind, orders 0 and 1, for x >= 0.
/// Absolute error below 1e-14 on [0, 50].
double bessel_j0(double x);
double bessel_j1(double x);

struct DiskReference {
  double e1_disk = 0.0;
  double j0_at_e1 = 0.0;
  double j1_at_e1 = 0.0;
};

/// First positive root of J0(E) = J1(E).
DiskReference disk_e1();

/// Unit-disk ground state (J0(E r), i e^{i theta} J1(E r)) at |x| <= 1.
std::pair<std::complex<double>, std::complex<double>> disk_eigenfunction(Vec2 x);

/// n * int_0^1 J0(E r)^2 r^(2n-1) dr.
double bessel_moment(int n, double E);

}  // namespace diracfk

#include "diracfk/specfun.hpp"

#include <cmath>

#include "diracfk/quadrature.hpp"

namespace diracfk {

namespace {

constexpr double kSeriesLimit = 4.0;

// sum_k (-1)^k (x/2)^(2k+order) / (k! (k+order)!)
double series(int order, double x) {
  const double q = -0.25 * x * x;
  double term = order == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= q / (k * static_cast<double>(k + order));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalised by J0 + 2 sum J_{2k} = 1.
std::pair<double, double> miller(double x) {
  int start = static_cast<int>(x + 30.0 + 10.0 * std::cbrt(x));
  start += start % 2;
  const double two_over_x = 2.0 / x;
  double jp1 = 0.0;
  double j = 1e-300;
  double j0 = 0.0;
  double j1 = 0.0;
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double jm1 = k * two_over_x * j - jp1;
    jp1 = j;
    j = jm1;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      j1 *= 1e-250;
      norm *= 1e-250;
    }
    // j now holds J_{k-1}.
    if (k - 1 == 1) j1 = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
  }
  j0 = j;
  norm += j0;
  return {j0 / norm, j1 / norm};
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x <= kSeriesLimit) return series(0, x);
  return miller(x).first;
}

double bessel_j1(double x) {
  const double s = x < 0.0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x <= kSeriesLimit) return s * series(1, x);
  return s * miller(x).second;
}

DiskReference disk_e1() {
  const auto g = [](double e) { return bessel_j0(e) - bessel_j1(e); };
  double lo = 1.0;
  double hi = 2.0;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  double e = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double j0 = bessel_j0(e);
    const double j1 = bessel_j1(e);
    // d/dE (J0 - J1) = -J1 - (J0 - J1 / E)
    const double step = (j0 - j1) / (-j1 - j0 + j1 / e);
    e -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return {e, bessel_j0(e), bessel_j1(e)};
}

std::pair<std::complex<double>, std::complex<double>> disk_eigenfunction(Vec2 x) {
  static const double e1 = disk_e1().e1_disk;
  const double r = x.norm();
  const std::complex<double> u1 = bessel_j0(e1 * r);
  if (r == 0.0) return {u1, 0.0};
  const std::complex<double> phase(x.x / r, x.y / r);
  return {u1, std::complex<double>(0.0, 1.0) * phase * bessel_j1(e1 * r)};
}

double bessel_moment(int n, double E) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "moment order must be >= 1");
  static const GaussRule rule = gauss_legendre(256, 0.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    const double j = bessel_j0(E * r);
    sum += rule.weights[i] * j * j * std::pow(r, 2 * n - 1);
  }
  return n * sum;
}

}  // namespace diracfk

#include "diracfk/optimize.hpp"

#include <algorithm>

namespace diracfk {

ScalarMin golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc <= fd ? ScalarMin{c, fc, evals} : ScalarMin{d, fd, evals};
}

SimplexMin nelder_mead_2d(const std::function<double(std::array<double, 2>)>& f,
                          std::array<double, 2> x0, double size, double xtol, int max_iter) {
  using P = std::array<double, 2>;
  std::array<P, 3> s{x0, P{x0[0] + size, x0[1]}, P{x0[0], x0[1] + size}};
  std::array<double, 3> v{f(s[0]), f(s[1]), f(s[2])};
  const auto lerp = [](const P& a, const P& b, double t) {
    return P{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return v[i] < v[j]; });
    const int best = idx[0];
    const int mid = idx[1];
    const int worst = idx[2];
    double spread = 0.0;
    for (int k : {mid, worst}) {
      spread = std::max(spread, std::hypot(s[k][0] - s[best][0], s[k][1] - s[best][1]));
    }
    if (spread < xtol) break;
    const P centroid{0.5 * (s[best][0] + s[mid][0]), 0.5 * (s[best][1] + s[mid][1])};
    const P refl = lerp(centroid, s[worst], -1.0);
    const double fr = f(refl);
    if (fr < v[best]) {
      const P expd = lerp(centroid, s[worst], -2.0);
      const double fe = f(expd);
      if (fe < fr) {
        s[worst] = expd;
        v[worst] = fe;
      } else {
        s[worst] = refl;
        v[worst] = fr;
      }
    } else if (fr < v[mid]) {
      s[worst] = refl;
      v[worst] = fr;
    } else {
      const bool outside = fr < v[worst];
      const P con = outside ? lerp(centroid, refl, 0.5) : lerp(centroid, s[worst], 0.5);
      const double fc = f(con);
      if (fc < std::min(fr, v[worst])) {
        s[worst] = con;
        v[worst] = fc;
      } else {
        for (int k : {mid, worst}) {
          s[k] = lerp(s[best], s[k], 0.5);
          v[k] = f(s[k]);
        }
      }
    }
  }
  const int best = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  return {s[best], v[best]};
}

}  // namespace diracfk

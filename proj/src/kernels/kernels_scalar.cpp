#include <cmath>

#include "diracfk/kernels.hpp"

namespace diracfk::kernels::scalar {

void mq_eval(double s2, std::span<const double> cx, std::span<const double> cy,
             std::span<const double> px, std::span<const double> py, MqBlock out) {
  const std::size_t n_pts = px.size();
  for (std::size_t j = 0; j < cx.size(); ++j) {
    const double cxj = cx[j];
    const double cyj = cy[j];
    double* val = out.value + j * out.ld;
    double* g1 = out.d1 ? out.d1 + j * out.ld : nullptr;
    double* g2 = out.d2 ? out.d2 + j * out.ld : nullptr;
    for (std::size_t i = 0; i < n_pts; ++i) {
      const double dx = px[i] - cxj;
      const double dy = py[i] - cyj;
      const double r2 = dx * dx + dy * dy;
      const double phi = std::sqrt(1.0 + s2 * r2);
      val[i] = phi;
      if (g1) {
        const double g = s2 / phi;
        g1[i] = g * dx;
        g2[i] = g * dy;
      }
    }
  }
}

Nearest nearest(double x, double y, std::span<const double> bx, std::span<const double> by) {
  Nearest best{INFINITY, 0};
  for (std::size_t i = 0; i < bx.size(); ++i) {
    const double dx = bx[i] - x;
    const double dy = by[i] - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.dist2) best = {d2, i};
  }
  return best;
}

}  // namespace diracfk::kernels::scalar

#include <cmath>

#include "diracfk/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define DIRACFK_HAVE_AVX2_TU 1
#else
#define DIRACFK_HAVE_AVX2_TU 0
#endif

namespace diracfk::kernels::avx2 {

#if DIRACFK_HAVE_AVX2_TU

bool compiled() { return true; }

__attribute__((target("avx2"))) void mq_eval(double s2, std::span<const double> cx,
                                             std::span<const double> cy,
                                             std::span<const double> px,
                                             std::span<const double> py, MqBlock out) {
  const std::size_t n_pts = px.size();
  const std::size_t n_vec = n_pts & ~std::size_t{3};
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vs2 = _mm256_set1_pd(s2);
  for (std::size_t j = 0; j < cx.size(); ++j) {
    const __m256d vcx = _mm256_set1_pd(cx[j]);
    const __m256d vcy = _mm256_set1_pd(cy[j]);
    double* val = out.value + j * out.ld;
    double* g1 = out.d1 ? out.d1 + j * out.ld : nullptr;
    double* g2 = out.d2 ? out.d2 + j * out.ld : nullptr;
    std::size_t i = 0;
    for (; i < n_vec; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(px.data() + i), vcx);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(py.data() + i), vcy);
      const __m256d r2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      const __m256d phi = _mm256_sqrt_pd(_mm256_add_pd(one, _mm256_mul_pd(vs2, r2)));
      _mm256_storeu_pd(val + i, phi);
      if (g1) {
        const __m256d g = _mm256_div_pd(vs2, phi);
        _mm256_storeu_pd(g1 + i, _mm256_mul_pd(g, dx));
        _mm256_storeu_pd(g2 + i, _mm256_mul_pd(g, dy));
      }
    }
    for (; i < n_pts; ++i) {
      const double dx = px[i] - cx[j];
      const double dy = py[i] - cy[j];
      const double phi = std::sqrt(1.0 + s2 * (dx * dx + dy * dy));
      val[i] = phi;
      if (g1) {
        const double g = s2 / phi;
        g1[i] = g * dx;
        g2[i] = g * dy;
      }
    }
  }
}

__attribute__((target("avx2"))) Nearest nearest(double x, double y,
                                                std::span<const double> bx,
                                                std::span<const double> by) {
  const std::size_t n = bx.size();
  const std::size_t n_vec = n & ~std::size_t{3};
  Nearest best{INFINITY, 0};
  if (n_vec > 0) {
    const __m256d vx = _mm256_set1_pd(x);
    const __m256d vy = _mm256_set1_pd(y);
    __m256d best_d = _mm256_set1_pd(INFINITY);
    __m256d best_i = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (std::size_t i = 0; i < n_vec; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(bx.data() + i), vx);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(by.data() + i), vy);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      // Strict less-than keeps the first occurrence within each lane.
      const __m256d lt = _mm256_cmp_pd(d2, best_d, _CMP_LT_OQ);
      best_d = _mm256_blendv_pd(best_d, d2, lt);
      best_i = _mm256_blendv_pd(best_i, idx, lt);
      idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double d[4];
    alignas(32) double k[4];
    _mm256_store_pd(d, best_d);
    _mm256_store_pd(k, best_i);
    for (int l = 0; l < 4; ++l) {
      const auto kl = static_cast<std::size_t>(k[l]);
      if (d[l] < best.dist2 || (d[l] == best.dist2 && kl < best.index)) best = {d[l], kl};
    }
  }
  for (std::size_t i = n_vec; i < n; ++i) {
    const double dx = bx[i] - x;
    const double dy = by[i] - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.dist2) best = {d2, i};
  }
  return best;
}

#else

bool compiled() { return false; }

void mq_eval(double s2, std::span<const double> cx, std::span<const double> cy,
             std::span<const double> px, std::span<const double> py, MqBlock out) {
  scalar::mq_eval(s2, cx, cy, px, py, out);
}

Nearest nearest(double x, double y, std::span<const double> bx, std::span<const double> by) {
  return scalar::nearest(x, y, bx, by);
}

#endif

}  // namespace diracfk::kernels::avx2

#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and an AVX2 variant; the variant is picked once at runtime
// from the CPU feature set (override with DIRACFK_ISA=scalar|avx2).
// Both variants are compiled without floating-point contraction, so their
// results are bit-identical.

#include <cstddef>
#include <span>

namespace diracfk::kernels {

enum class Isa { Scalar, Avx2 };

/// Column-major output block: entry (i, j) lives at base[i + j * ld].
/// d1/d2 may be null when gradients are not needed.
struct MqBlock {
  double* value = nullptr;
  double* d1 = nullptr;
  double* d2 = nullptr;
  std::ptrdiff_t ld = 0;
};

struct Nearest {
  double dist2 = 0.0;
  std::size_t index = 0;
};

/// phi = sqrt(1 + s2 |p - c|^2) and its gradient s2 (p - c) / phi for every
/// point p (rows) and center c (columns).
using MqEvalFn = void (*)(double s2, std::span<const double> cx, std::span<const double> cy,
                          std::span<const double> px, std::span<const double> py, MqBlock out);

/// Closest sample of a polyline to (x, y); ties resolve to the lowest index.
using NearestFn = Nearest (*)(double x, double y, std::span<const double> bx,
                              std::span<const double> by);

namespace scalar {
void mq_eval(double s2, std::span<const double> cx, std::span<const double> cy,
             std::span<const double> px, std::span<const double> py, MqBlock out);
Nearest nearest(double x, double y, std::span<const double> bx, std::span<const double> by);
}  // namespace scalar

namespace avx2 {
bool compiled();
void mq_eval(double s2, std::span<const double> cx, std::span<const double> cy,
             std::span<const double> px, std::span<const double> py, MqBlock out);
Nearest nearest(double x, double y, std::span<const double> bx, std::span<const double> by);
}  // namespace avx2

bool avx2_supported();
Isa active_isa();
/// Forces a variant; requesting Avx2 on a machine without it is ignored.
void set_isa(Isa isa);
const char* isa_name(Isa isa);

void mq_eval(double s2, std::span<const double> cx, std::span<const double> cy,
             std::span<const double> px, std::span<const double> py, MqBlock out);
Nearest nearest(double x, double y, std::span<const double> bx, std::span<const double> by);

}  // namespace diracfk::kernels

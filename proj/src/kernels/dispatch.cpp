#include <atomic>
#include <cstdlib>
#include <string_view>

#include "diracfk/kernels.hpp"

namespace diracfk::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("DIRACFK_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && avx2_supported()) return Isa::Avx2;
  }
  return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return avx2::compiled() && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_supported()) return;
  current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void mq_eval(double s2, std::span<const double> cx, std::span<const double> cy,
             std::span<const double> px, std::span<const double> py, MqBlock out) {
  if (active_isa() == Isa::Avx2) {
    avx2::mq_eval(s2, cx, cy, px, py, out);
  } else {
    scalar::mq_eval(s2, cx, cy, px, py, out);
  }
}

Nearest nearest(double x, double y, std::span<const double> bx, std::span<const double> by) {
  return active_isa() == Isa::Avx2 ? avx2::nearest(x, y, bx, by)
                                   : scalar::nearest(x, y, bx, by);
}

}  // namespace diracfk::kernels

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>

namespace diracfk {

struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of f on [a, b], stopping once the
/// bracket is narrower than tol.
ScalarMin golden_section(const std::function<double(double)>& f, double a, double b, double tol);

struct SimplexMin {
  std::array<double, 2> x{};
  double value = 0.0;
};

/// Nelder-Mead minimisation in two variables from an initial simplex of
/// edge length `size` around x0.
SimplexMin nelder_mead_2d(const std::function<double(std::array<double, 2>)>& f,
                          std::array<double, 2> x0, double size, double xtol, int max_iter);

}  // namespace diracfk

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace diracfk {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  InvalidArgument,
  NonPositiveRadius,
  UnivalenceViolation,
  InvalidDomain,
  GenerationFailure,
  GridTooCoarse,
  RepelFailure,
  NoEigenvalueFound,
  MassDegenerate,
  BadBracket,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace diracfk

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace strobo {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

using cdouble = std::complex<double>;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// 2D point / vector in metres. The reflection plane is the x-axis.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
};

inline Vec2 unit(Vec2 v) {
  const double n = v.norm();
  return {v.x / n, v.y / n};
}

// Error taxonomy. Every error thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range argument to a numeric routine.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The beam footprint does not intersect the plane.
class IlluminationError : public Error {
 public:
  using Error::Error;
};

/// A requested plane/codebook design cannot be realised.
class DesignError : public Error {
 public:
  using Error::Error;
};

/// Scenario or input record failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incompatible file.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " is not finite");
}

}  // namespace strobo

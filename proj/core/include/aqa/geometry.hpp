#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>

#include "aqa/skeleton.hpp"

namespace aqa {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::hypot(a.x, a.y, a.z); }

inline Vec3 position(const Landmark& lm) { return {lm.x, lm.y, lm.z}; }

inline constexpr double kDegenerateEps = 1e-9;

/// Mean of the four polygon vertices.
Vec3 limb_center(Vec3 p1, Vec3 p2, Vec3 p3, Vec3 p4);

/// Unsigned angle in [0, pi]; nullopt when either vector is shorter than eps.
std::optional<double> angle_between(Vec3 u, Vec3 v, double eps = kDegenerateEps);

/// Weighted sum of landmark positions. Weights are expected to sum to one;
/// the registry layer enforces that at load time.
Vec3 barycenter(const LandmarkArray& landmarks, std::span<const std::pair<int, double>> coeffs);

}  // namespace aqa

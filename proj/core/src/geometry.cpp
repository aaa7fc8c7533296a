#include "aqa/geometry.hpp"

namespace aqa {

Vec3 limb_center(Vec3 p1, Vec3 p2, Vec3 p3, Vec3 p4) {
  return {(p1.x + p2.x + p3.x + p4.x) / 4.0, (p1.y + p2.y + p3.y + p4.y) / 4.0,
          (p1.z + p2.z + p3.z + p4.z) / 4.0};
}

std::optional<double> angle_between(Vec3 u, Vec3 v, double eps) {
  if (norm(u) <= eps || norm(v) <= eps) return std::nullopt;
  // atan2 form stays accurate near 0 and pi where acos(cos) loses half the digits.
  return std::atan2(norm(cross(u, v)), dot(u, v));
}

Vec3 barycenter(const LandmarkArray& landmarks, std::span<const std::pair<int, double>> coeffs) {
  Vec3 acc;
  for (const auto& [index, weight] : coeffs) {
    acc = acc + weight * position(landmarks[static_cast<std::size_t>(index)]);
  }
  return acc;
}

}  // namespace aqa

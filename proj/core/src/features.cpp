#include "aqa/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aqa {

namespace {

using L = LandmarkId;

const LandmarkArray& coords(const SkeletonFrame& f, FeatureSpace s) {
  return s == FeatureSpace::d2 ? f.lm2d : f.lm3d;
}

Vec3 resolve(const PointRef& p, const LandmarkArray& lms) {
  if (p.size() == 1) return position(lms[static_cast<std::size_t>(p[0])]);
  Vec3 acc;
  for (int i : p) acc = acc + position(lms[static_cast<std::size_t>(i)]);
  return (1.0 / static_cast<double>(p.size())) * acc;
}

Vec3 mid(const LandmarkArray& lms, L a, L b) {
  return 0.5 * (position(lms[idx(a)]) + position(lms[idx(b)]));
}

// Spine runs mid-hip -> mid-shoulder; mid-hip is the body origin.
struct BodyAxis {
  Vec3 origin;
  Vec3 spine;
};

BodyAxis body_axis(const LandmarkArray& lms) {
  const Vec3 hips = mid(lms, L::LeftHip, L::RightHip);
  return {hips, mid(lms, L::LeftShoulder, L::RightShoulder) - hips};
}

std::optional<double> direction_value(const FeatureSpec& spec, const SkeletonFrame& frame) {
  switch (spec.variant) {
    case DirectionVariant::horizontal: {
      const auto& lms = coords(frame, spec.space);
      const Vec3 line = resolve(spec.points[0], lms) - resolve(spec.points[1], lms);
      return angle_between(line, {1.0, 0.0, 0.0});
    }
    case DirectionVariant::rotation: {
      const Vec3 line = resolve(spec.points[0], frame.lm3d) - resolve(spec.points[1], frame.lm3d);
      if (norm(line) <= kDegenerateEps) return std::nullopt;
      return std::atan2(std::hypot(line.x, line.y), std::abs(line.z));
    }
    case DirectionVariant::facing: {
      const Vec3 a = resolve(spec.points[0], frame.lm2d);
      const Vec3 b = resolve(spec.points[1], frame.lm2d);
      const Vec3 line{a.x - b.x, a.y - b.y, 0.0};
      if (norm(line) <= kDegenerateEps) return std::nullopt;
      return line.x >= 0.0 ? kFlagHigh : kFlagLow;
    }
  }
  return std::nullopt;
}

std::optional<double> tension_value(const FeatureSpec& spec, const SkeletonFrame& frame) {
  const auto& lms = frame.lm3d;
  const double limb = norm(resolve(spec.points[0], lms) - resolve(spec.points[1], lms));
  const double shoulders = norm(resolve(spec.points[2], lms) - resolve(spec.points[3], lms));
  if (shoulders <= kDegenerateEps) return std::nullopt;
  return limb > spec.threshold * shoulders ? kFlagHigh : kFlagLow;
}

template <std::size_t N>
std::array<std::optional<double>, N> evaluate_group(const FeatureRegistry& reg, std::size_t first,
                                                    const SkeletonFrame& frame) {
  static const BarycenterTable table;
  std::array<std::optional<double>, N> out;
  for (std::size_t k = 0; k < N; ++k) out[k] = evaluate_feature(reg[first + k], frame, table);
  return out;
}

const FeatureRegistry& default_registry(FeatureSpace s) {
  static const FeatureRegistry r2 = FeatureRegistry::defaults(FeatureMode::d2);
  static const FeatureRegistry r3 = FeatureRegistry::defaults(FeatureMode::d3);
  return s == FeatureSpace::d2 ? r2 : r3;
}

std::size_t first_index(const FeatureRegistry& reg, const std::string& name) {
  auto i = reg.index_of(name);
  return i.value();
}

}  // namespace

std::size_t FeatureVector::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

std::optional<double> evaluate_feature(const FeatureSpec& spec, const SkeletonFrame& frame,
                                       const BarycenterTable& barycenter_table) {
  const auto& lms = coords(frame, spec.space);
  switch (spec.kind) {
    case FeatureKind::barycentric: {
      const auto axis = body_axis(lms);
      return angle_between(axis.spine, barycenter(lms, barycenter_table.entries()) - axis.origin);
    }
    case FeatureKind::joint_angle: {
      const Vec3 vertex = resolve(spec.points[1], lms);
      return angle_between(resolve(spec.points[0], lms) - vertex, resolve(spec.points[2], lms) - vertex);
    }
    case FeatureKind::limb_center: {
      const auto axis = body_axis(lms);
      const Vec3 center = limb_center(resolve(spec.points[0], lms), resolve(spec.points[1], lms),
                                      resolve(spec.points[2], lms), resolve(spec.points[3], lms));
      return angle_between(axis.spine, center - axis.origin);
    }
    case FeatureKind::direction:
      return direction_value(spec, frame);
    case FeatureKind::linkage:
      return angle_between(resolve(spec.points[1], lms) - resolve(spec.points[0], lms),
                           resolve(spec.points[3], lms) - resolve(spec.points[2], lms));
    case FeatureKind::tension_ratio:
      return tension_value(spec, frame);
  }
  return std::nullopt;
}

FeatureVector extract_feature_vector(const SkeletonFrame& frame, const FeatureRegistry& registry,
                                     const ExtractionConfig& config) {
  FeatureVector out;
  out.values.assign(registry.size(), 0.0);
  out.valid.assign(registry.size(), false);

  auto visible = [&](int i) { return frame.lm2d[static_cast<std::size_t>(i)].visibility >= config.min_visibility; };

  for (std::size_t k = 0; k < registry.size(); ++k) {
    const auto& spec = registry[k];
    const auto used = spec.landmark_indices();
    bool ok = std::all_of(used.begin(), used.end(), visible);
    if (ok && spec.kind == FeatureKind::barycentric) {
      const auto& entries = config.barycenter.entries();
      ok = std::all_of(entries.begin(), entries.end(), [&](const auto& e) { return visible(e.first); });
    }
    if (!ok) continue;
    if (auto v = evaluate_feature(spec, frame, config.barycenter); v && std::isfinite(*v)) {
      out.values[k] = *v;
      out.valid[k] = true;
    }
  }
  return out;
}

FeatureSequence extract_sequence(const KeypointSequence& seq, const FeatureRegistry& registry,
                                 const ExtractionConfig& config) {
  FeatureSequence out;
  out.reserve(seq.frames.size());
  for (const auto& f : seq.frames) out.push_back(extract_feature_vector(f, registry, config));
  return out;
}

std::array<std::optional<double>, 13> joint_angle_features(const SkeletonFrame& frame, FeatureSpace space) {
  const auto& reg = default_registry(space);
  return evaluate_group<13>(reg, first_index(reg, (space == FeatureSpace::d2 ? "2d" : "3d") + std::string(".angle.left_elbow")), frame);
}

std::array<std::optional<double>, 4> limb_mass_center_features(const SkeletonFrame& frame, FeatureSpace space) {
  const auto& reg = default_registry(space);
  return evaluate_group<4>(
      reg, first_index(reg, (space == FeatureSpace::d2 ? "2d" : "3d") + std::string(".limb_center.left_arm")), frame);
}

std::optional<double> barycentric_feature(const SkeletonFrame& frame, FeatureSpace space,
                                          const BarycenterTable& barycenter_table) {
  const auto& reg = default_registry(space);
  return evaluate_feature(reg[0], frame, barycenter_table);
}

std::array<std::optional<double>, 6> direction_features(const SkeletonFrame& frame) {
  const auto& reg = default_registry(FeatureSpace::d2);
  static const BarycenterTable table;
  const char* order[] = {"pelvic_horizontal", "pelvic_rotation", "shoulder_horizontal",
                         "shoulder_rotation", "shoulder_facing", "hip_facing"};
  std::array<std::optional<double>, 6> out;
  for (std::size_t k = 0; k < 6; ++k) {
    out[k] = evaluate_feature(reg[first_index(reg, std::string("2d.direction.") + order[k])], frame, table);
  }
  return out;
}

std::array<std::optional<double>, 4> linkage_features(const SkeletonFrame& frame, FeatureSpace space) {
  const auto& reg = default_registry(space);
  return evaluate_group<4>(
      reg, first_index(reg, (space == FeatureSpace::d2 ? "2d" : "3d") + std::string(".linkage.left_forearm_calf")),
      frame);
}

std::array<std::optional<double>, 2> tension_features(const SkeletonFrame& frame) {
  const auto& reg = default_registry(FeatureSpace::d2);
  return evaluate_group<2>(reg, first_index(reg, "2d.tension.feet_shoulder"), frame);
}

}  // namespace aqa

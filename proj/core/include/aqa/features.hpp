#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "aqa/geometry.hpp"
#include "aqa/registry.hpp"
#include "aqa/skeleton.hpp"

namespace aqa {

inline constexpr double kFlagLow = 1.5707963267948966;   // pi/2
inline constexpr double kFlagHigh = 4.71238898038469;    // 3pi/2

struct ExtractionConfig {
  // A feature is masked when any landmark it reads has 2D visibility below this.
  double min_visibility = 0.5;
  BarycenterTable barycenter;
};

/// Per-frame feature values aligned to a registry. `valid[k] == false` marks
/// a feature whose inputs were occluded or geometrically degenerate; its value
/// is then 0 and must be ignored.
struct FeatureVector {
  std::vector<double> values;
  std::vector<bool> valid;

  std::size_t size() const { return values.size(); }
  std::size_t valid_count() const;
};

using FeatureSequence = std::vector<FeatureVector>;

/// Geometry only, no visibility gating.
std::optional<double> evaluate_feature(const FeatureSpec& spec, const SkeletonFrame& frame,
                                       const BarycenterTable& barycenter);

FeatureVector extract_feature_vector(const SkeletonFrame& frame, const FeatureRegistry& registry,
                                     const ExtractionConfig& config = {});

FeatureSequence extract_sequence(const KeypointSequence& seq, const FeatureRegistry& registry,
                                 const ExtractionConfig& config = {});

// Grouped views over the default feature definitions. Each entry is nullopt
// when the geometry is degenerate.

/// Order: L/R elbow, L/R shoulder, L/R hip, L/R knee, L/R ankle, neck, L/R shoulder girdle.
std::array<std::optional<double>, 13> joint_angle_features(const SkeletonFrame& frame, FeatureSpace space);
/// Order: left arm, right arm, left leg, right leg.
std::array<std::optional<double>, 4> limb_mass_center_features(const SkeletonFrame& frame, FeatureSpace space);
std::optional<double> barycentric_feature(const SkeletonFrame& frame, FeatureSpace space,
                                          const BarycenterTable& barycenter = {});
/// Order: pelvic horizontal, pelvic rotation, shoulder horizontal, shoulder
/// rotation, shoulder facing flag, hip facing flag.
std::array<std::optional<double>, 6> direction_features(const SkeletonFrame& frame);
/// Order: L/R forearm-calf, L/R forearm-thigh.
std::array<std::optional<double>, 4> linkage_features(const SkeletonFrame& frame, FeatureSpace space);
/// (feet vs shoulder width, wrists vs shoulder width), each pi/2 or 3pi/2.
std::array<std::optional<double>, 2> tension_features(const SkeletonFrame& frame);

}  // namespace aqa

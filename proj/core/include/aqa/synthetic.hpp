#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "aqa/evaluation.hpp"
#include "aqa/skeleton.hpp"

// Procedural skeletons for fixtures, property tests and benchmarks. Poses are
// built by forward kinematics from a handful of joint angles (degrees), then
// projected orthographically for the 2D landmarks.

namespace aqa::synthetic {

struct PoseParams {
  double trunk_lean = 0.0;   // forward, toward the camera
  double trunk_twist = 0.0;  // about the vertical axis
  double shoulder_abduction[2] = {10.0, 10.0};  // [left, right]
  double shoulder_flexion[2] = {0.0, 0.0};
  double elbow_flexion[2] = {5.0, 5.0};
  double hip_abduction[2] = {5.0, 5.0};
  double hip_flexion[2] = {0.0, 0.0};
  double knee_flexion[2] = {3.0, 3.0};
};

/// Landmarks for a pose; mid-hip sits at the 3D origin, visibilities are 1.
SkeletonFrame build_frame(const PoseParams& pose, double t = 0.0);

/// A random but anatomically plausible frame with landmark noise, random
/// global offset and scale. Every default feature is valid on it.
SkeletonFrame random_frame(std::mt19937_64& rng);

/// Independent random frames at 30 fps.
KeypointSequence random_sequence(std::mt19937_64& rng, std::size_t length);

/// Swaps left and right: negates x in both spaces and exchanges paired landmarks.
SkeletonFrame mirror_frame(const SkeletonFrame& frame);

struct Options {
  std::size_t tests_per_category = 4;
  std::size_t template_frames = 90;
};

struct Dataset {
  std::vector<std::string> categories;
  std::vector<KeypointSequence> templates;  // one per category, same order
  std::vector<KeypointSequence> tests;      // category-major
  std::vector<std::string> test_categories;
};

/// Three exercise categories (arm raise, squat, trunk twist). Tests are the
/// template motion with jittered tempo, amplitude, phase and landmark noise.
Dataset generate(std::uint64_t seed, const Options& options = {});

/// Writes templates/*.json, tests/*.json and manifest.json under `dir`.
DatasetManifest write_dataset(const Dataset& data, const std::filesystem::path& dir);

}  // namespace aqa::synthetic

#include "aqa/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "aqa/geometry.hpp"

namespace aqa::synthetic {

namespace {

using L = LandmarkId;

constexpr double kDeg = std::numbers::pi / 180.0;

// Rodrigues rotation of v about unit axis k.
Vec3 rotate(Vec3 v, Vec3 k, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return c * v + s * cross(k, v) + ((1.0 - c) * dot(k, v)) * k;
}

void set(LandmarkArray& lms, L id, Vec3 p) {
  auto& lm = lms[idx(id)];
  lm.x = p.x;
  lm.y = p.y;
  lm.z = p.z;
  lm.visibility = 1.0;
}

// 3D: y up, -z toward the camera, subject faces the camera so their left is +x.
// 2D: normalised image coordinates, y down.
void project(SkeletonFrame& f) {
  for (std::size_t k = 0; k < kLandmarkCount; ++k) {
    const auto& p = f.lm3d[k];
    f.lm2d[k] = {0.5 + 0.35 * p.x, 0.55 - 0.35 * p.y, 0.0, p.visibility};
  }
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Motion {
  std::string name;
  // tau in [0, 1]; amp scales the movement range around the rest pose.
  PoseParams (*pose)(double tau, double amp);
};

double bell(double tau) { return std::sin(std::numbers::pi * tau) * std::sin(std::numbers::pi * tau); }

PoseParams arm_raise(double tau, double amp) {
  PoseParams p;
  const double a = 20.0 + amp * 140.0 * bell(tau);
  p.shoulder_abduction[0] = p.shoulder_abduction[1] = a;
  p.elbow_flexion[0] = p.elbow_flexion[1] = 8.0;
  p.hip_abduction[0] = p.hip_abduction[1] = 4.0;
  p.knee_flexion[0] = p.knee_flexion[1] = 4.0;
  return p;
}

PoseParams squat(double tau, double amp) {
  PoseParams p;
  const double b = amp * bell(tau);
  p.trunk_lean = 15.0 + 30.0 * b;
  p.shoulder_flexion[0] = p.shoulder_flexion[1] = 70.0 + 20.0 * b;
  p.shoulder_abduction[0] = p.shoulder_abduction[1] = 8.0;
  p.elbow_flexion[0] = p.elbow_flexion[1] = 10.0;
  p.hip_abduction[0] = p.hip_abduction[1] = 14.0;
  p.hip_flexion[0] = p.hip_flexion[1] = 25.0 + 75.0 * b;
  p.knee_flexion[0] = p.knee_flexion[1] = 35.0 + 85.0 * b;
  return p;
}

PoseParams trunk_twist(double tau, double amp) {
  PoseParams p;
  p.trunk_twist = amp * 40.0 * std::sin(2.0 * std::numbers::pi * tau);
  p.trunk_lean = 5.0;
  p.shoulder_abduction[0] = p.shoulder_abduction[1] = 85.0;
  p.shoulder_flexion[0] = p.shoulder_flexion[1] = 15.0;
  p.elbow_flexion[0] = p.elbow_flexion[1] = 110.0;
  p.hip_abduction[0] = p.hip_abduction[1] = 22.0;
  p.knee_flexion[0] = p.knee_flexion[1] = 18.0;
  p.hip_flexion[0] = p.hip_flexion[1] = 8.0;
  return p;
}

const std::vector<Motion>& motions() {
  static const std::vector<Motion> m = {
      {"arm_raise", &arm_raise},
      {"squat", &squat},
      {"trunk_twist", &trunk_twist},
  };
  return m;
}

struct Jitter {
  double amp = 1.0;
  double warp = 0.0;     // tempo distortion, |warp| < 1 keeps time monotone
  double phase = 0.0;    // start offset in tau
  double noise = 0.0;    // landmark noise, model units
};

KeypointSequence render(const Motion& motion, std::size_t frames, const Jitter& j, std::mt19937_64& rng,
                        const std::string& source_id) {
  KeypointSequence seq;
  seq.fps = 30.0;
  seq.label = motion.name;
  seq.source_id = source_id;
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t k = 0; k < frames; ++k) {
    const double u = frames > 1 ? static_cast<double>(k) / static_cast<double>(frames - 1) : 0.0;
    double tau = u + j.warp * std::sin(2.0 * std::numbers::pi * u) / (2.0 * std::numbers::pi) + j.phase;
    tau = std::clamp(tau, 0.0, 1.0);
    auto frame = build_frame(motion.pose(tau, j.amp), static_cast<double>(k) / seq.fps);
    if (j.noise > 0.0) {
      for (auto& lm : frame.lm3d) {
        lm.x += j.noise * noise(rng);
        lm.y += j.noise * noise(rng);
        lm.z += j.noise * noise(rng);
      }
      project(frame);
    }
    seq.frames.push_back(frame);
  }
  return seq;
}

}  // namespace

SkeletonFrame build_frame(const PoseParams& pose, double t) {
  SkeletonFrame f;
  f.t = t;
  auto& lm = f.lm3d;

  const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  const Vec3 origin{0, 0, 0};

  // Trunk frame: twist about vertical, then lean toward the camera.
  auto trunk = [&](Vec3 v) {
    v = rotate(v, ex, -pose.trunk_lean * kDeg);
    return rotate(v, ey, pose.trunk_twist * kDeg);
  };
  const Vec3 up = trunk(ey);
  const Vec3 side = trunk(ex);
  const Vec3 fwd = trunk(Vec3{0, 0, -1});

  const Vec3 mid_shoulder = origin + 0.52 * up;
  set(lm, L::LeftHip, origin + 0.1 * ex);
  set(lm, L::RightHip, origin - 0.1 * ex);
  set(lm, L::LeftShoulder, mid_shoulder + 0.18 * side);
  set(lm, L::RightShoulder, mid_shoulder - 0.18 * side);

  const Vec3 nose = mid_shoulder + 0.22 * up + 0.07 * fwd;
  set(lm, L::Nose, nose);
  set(lm, L::LeftEyeInner, nose + 0.035 * up + 0.015 * side - 0.01 * fwd);
  set(lm, L::LeftEye, nose + 0.037 * up + 0.03 * side - 0.012 * fwd);
  set(lm, L::LeftEyeOuter, nose + 0.035 * up + 0.045 * side - 0.015 * fwd);
  set(lm, L::RightEyeInner, nose + 0.035 * up - 0.015 * side - 0.01 * fwd);
  set(lm, L::RightEye, nose + 0.037 * up - 0.03 * side - 0.012 * fwd);
  set(lm, L::RightEyeOuter, nose + 0.035 * up - 0.045 * side - 0.015 * fwd);
  set(lm, L::LeftEar, nose + 0.02 * up + 0.075 * side - 0.08 * fwd);
  set(lm, L::RightEar, nose + 0.02 * up - 0.075 * side - 0.08 * fwd);
  set(lm, L::MouthLeft, nose - 0.035 * up + 0.025 * side - 0.01 * fwd);
  set(lm, L::MouthRight, nose - 0.035 * up - 0.025 * side - 0.01 * fwd);

  struct Side {
    int k;
    double sign;
    L shoulder, elbow, wrist, pinky, index, thumb, hip, knee, ankle, heel, foot;
  };
  const Side sides[2] = {
      {0, 1.0, L::LeftShoulder, L::LeftElbow, L::LeftWrist, L::LeftPinky, L::LeftIndex, L::LeftThumb,
       L::LeftHip, L::LeftKnee, L::LeftAnkle, L::LeftHeel, L::LeftFootIndex},
      {1, -1.0, L::RightShoulder, L::RightElbow, L::RightWrist, L::RightPinky, L::RightIndex, L::RightThumb,
       L::RightHip, L::RightKnee, L::RightAnkle, L::RightHeel, L::RightFootIndex},
  };

  for (const auto& s : sides) {
    // Arm hangs along the trunk, abducts in the frontal plane, flexes forward.
    auto arm_frame = [&](Vec3 v) {
      v = rotate(v, -1.0 * fwd, s.sign * pose.shoulder_abduction[s.k] * kDeg);
      return rotate(v, side, pose.shoulder_flexion[s.k] * kDeg);
    };
    const Vec3 upper = arm_frame(-1.0 * up);
    const Vec3 shoulder = position(lm[idx(s.shoulder)]);
    const Vec3 elbow = shoulder + 0.28 * upper;
    // Elbow hinge axis moves with the upper arm; positive flexion folds toward the front.
    const Vec3 fore = rotate(upper, arm_frame(side), pose.elbow_flexion[s.k] * kDeg);
    const Vec3 wrist = elbow + 0.25 * fore;
    set(lm, s.elbow, elbow);
    set(lm, s.wrist, wrist);
    set(lm, s.pinky, wrist + 0.07 * fore + 0.02 * s.sign * side);
    set(lm, s.index, wrist + 0.085 * fore);
    set(lm, s.thumb, wrist + 0.04 * fore - 0.025 * s.sign * side + 0.01 * fwd);

    // Legs hang from the hips in world axes.
    auto leg_frame = [&](Vec3 v) {
      v = rotate(v, ez, s.sign * pose.hip_abduction[s.k] * kDeg);
      return rotate(v, ex, pose.hip_flexion[s.k] * kDeg);
    };
    const Vec3 thigh = leg_frame(Vec3{0, -1, 0});
    const Vec3 hip = position(lm[idx(s.hip)]);
    const Vec3 knee = hip + 0.45 * thigh;
    const Vec3 shank = rotate(thigh, leg_frame(ex), -pose.knee_flexion[s.k] * kDeg);
    const Vec3 ankle = knee + 0.43 * shank;
    set(lm, s.knee, knee);
    set(lm, s.ankle, ankle);
    set(lm, s.heel, ankle + Vec3{0.0, -0.05, 0.05});
    set(lm, s.foot, ankle + Vec3{0.01 * s.sign, -0.06, -0.15});
  }

  project(f);
  return f;
}

SkeletonFrame random_frame(std::mt19937_64& rng) {
  PoseParams p;
  p.trunk_lean = uniform(rng, -10.0, 50.0);
  p.trunk_twist = uniform(rng, -50.0, 50.0);
  for (int k = 0; k < 2; ++k) {
    p.shoulder_abduction[k] = uniform(rng, 5.0, 170.0);
    p.shoulder_flexion[k] = uniform(rng, -20.0, 120.0);
    p.elbow_flexion[k] = uniform(rng, 5.0, 140.0);
    p.hip_abduction[k] = uniform(rng, 0.0, 35.0);
    p.hip_flexion[k] = uniform(rng, -10.0, 100.0);
    p.knee_flexion[k] = uniform(rng, 5.0, 120.0);
  }
  auto f = build_frame(p);
  std::normal_distribution<double> noise(0.0, 0.01);
  const double scale = uniform(rng, 0.5, 2.0);
  const Vec3 offset{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
  for (auto& lm : f.lm3d) {
    lm.x = scale * (lm.x + noise(rng)) + offset.x;
    lm.y = scale * (lm.y + noise(rng)) + offset.y;
    lm.z = scale * (lm.z + noise(rng)) + offset.z;
    lm.visibility = uniform(rng, 0.6, 1.0);
  }
  project(f);
  return f;
}

KeypointSequence random_sequence(std::mt19937_64& rng, std::size_t length) {
  KeypointSequence seq;
  seq.fps = 30.0;
  seq.source_id = "random";
  for (std::size_t k = 0; k < length; ++k) {
    auto f = random_frame(rng);
    f.t = static_cast<double>(k) / seq.fps;
    seq.frames.push_back(f);
  }
  return seq;
}

SkeletonFrame mirror_frame(const SkeletonFrame& frame) {
  SkeletonFrame out;
  out.t = frame.t;
  for (std::size_t k = 0; k < kLandmarkCount; ++k) {
    const auto src = static_cast<std::size_t>(mirror_landmark(static_cast<int>(k)));
    out.lm2d[k] = frame.lm2d[src];
    out.lm2d[k].x = -out.lm2d[k].x;
    out.lm3d[k] = frame.lm3d[src];
    out.lm3d[k].x = -out.lm3d[k].x;
  }
  return out;
}

Dataset generate(std::uint64_t seed, const Options& options) {
  if (options.template_frames < 2) throw std::invalid_argument("template_frames must be >= 2");
  std::mt19937_64 rng(seed);
  Dataset data;
  for (const auto& m : motions()) {
    data.categories.push_back(m.name);
    data.templates.push_back(render(m, options.template_frames, Jitter{}, rng, m.name + "_template"));
  }
  for (const auto& m : motions()) {
    for (std::size_t k = 0; k < options.tests_per_category; ++k) {
      Jitter j;
      j.amp = uniform(rng, 0.92, 1.08);
      j.warp = uniform(rng, -0.35, 0.35);
      j.phase = uniform(rng, -0.03, 0.03);
      j.noise = 0.004;
      const auto length = static_cast<std::size_t>(
          std::lround(static_cast<double>(options.template_frames) * uniform(rng, 0.8, 1.2)));
      data.tests.push_back(render(m, std::max<std::size_t>(length, 2), j, rng, m.name + "_test" + std::to_string(k)));
      data.test_categories.push_back(m.name);
    }
  }
  return data;
}

DatasetManifest write_dataset(const Dataset& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "templates", ec);
  std::filesystem::create_directories(dir / "tests", ec);
  if (ec || !std::filesystem::is_directory(dir / "templates") || !std::filesystem::is_directory(dir / "tests")) {
    throw std::runtime_error("cannot create dataset directories under " + dir.string());
  }
  DatasetManifest manifest;
  for (std::size_t k = 0; k < data.templates.size(); ++k) {
    const auto path = dir / "templates" / (data.templates[k].source_id + ".json");
    save_sequence(data.templates[k], path);
    manifest.templates.push_back({path, data.categories[k]});
  }
  for (std::size_t k = 0; k < data.tests.size(); ++k) {
    const auto path = dir / "tests" / (data.tests[k].source_id + ".json");
    save_sequence(data.tests[k], path);
    manifest.tests.push_back({path, data.test_categories[k], std::nullopt});
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << manifest.to_json(dir);
  return manifest;
}

}  // namespace aqa::synthetic

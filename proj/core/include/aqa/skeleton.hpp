#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aqa {

inline constexpr std::size_t kLandmarkCount = 33;

// 33-point body model. Indices follow the MediaPipe pose topology:
// 0 nose ... 32 right foot index. "Left" is the subject's left.
enum class LandmarkId : int {
  Nose = 0,
  LeftEyeInner = 1,
  LeftEye = 2,
  LeftEyeOuter = 3,
  RightEyeInner = 4,
  RightEye = 5,
  RightEyeOuter = 6,
  LeftEar = 7,
  RightEar = 8,
  MouthLeft = 9,
  MouthRight = 10,
  LeftShoulder = 11,
  RightShoulder = 12,
  LeftElbow = 13,
  RightElbow = 14,
  LeftWrist = 15,
  RightWrist = 16,
  LeftPinky = 17,
  RightPinky = 18,
  LeftIndex = 19,
  RightIndex = 20,
  LeftThumb = 21,
  RightThumb = 22,
  LeftHip = 23,
  RightHip = 24,
  LeftKnee = 25,
  RightKnee = 26,
  LeftAnkle = 27,
  RightAnkle = 28,
  LeftHeel = 29,
  RightHeel = 30,
  LeftFootIndex = 31,
  RightFootIndex = 32,
};

constexpr int idx(LandmarkId id) { return static_cast<int>(id); }

std::string_view landmark_name(int index);

/// Index of the left/right counterpart; the nose maps to itself.
int mirror_landmark(int index);

struct Landmark {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double visibility = 1.0;

  friend bool operator==(const Landmark&, const Landmark&) = default;
};

using LandmarkArray = std::array<Landmark, kLandmarkCount>;

/// One frame of pose output. `lm3d` visibilities mirror `lm2d`; the file
/// formats only carry visibility on the 2D landmarks.
struct SkeletonFrame {
  LandmarkArray lm2d{};
  LandmarkArray lm3d{};
  double t = 0.0;

  friend bool operator==(const SkeletonFrame&, const SkeletonFrame&) = default;
};

struct KeypointSequence {
  double fps = 30.0;
  std::vector<SkeletonFrame> frames;
  std::optional<std::string> label;
  std::string source_id;
  // Input carried no 3D landmarks; lm3d holds z=0 copies of lm2d.
  bool two_d_only = false;

  std::size_t size() const { return frames.size(); }

  friend bool operator==(const KeypointSequence&, const KeypointSequence&) = default;
};

enum class SequenceFormat { json, csv };

/// Raised for malformed or invariant-violating keypoint data. `frame()` is
/// set when the problem is attributable to a single frame.
class SequenceError : public std::runtime_error {
 public:
  explicit SequenceError(const std::string& what, std::optional<std::size_t> frame = std::nullopt)
      : std::runtime_error(what), frame_(frame) {}
  std::optional<std::size_t> frame() const { return frame_; }

 private:
  std::optional<std::size_t> frame_;
};

KeypointSequence parse_sequence(std::string_view content, SequenceFormat format);
std::string serialize_sequence(const KeypointSequence& seq, SequenceFormat format);

/// Format is chosen by extension (.csv, anything else is JSON).
KeypointSequence load_sequence(const std::filesystem::path& path);
void save_sequence(const KeypointSequence& seq, const std::filesystem::path& path);

/// Throws SequenceError if `seq` breaks a structural invariant (fps, frame
/// count, timestamp ordering, finiteness, visibility range).
void check_sequence(const KeypointSequence& seq);

struct ValidationReport {
  struct FrameEntry {
    std::size_t frame = 0;
    std::vector<int> landmarks;
  };
  std::vector<FrameEntry> low_visibility;

  bool empty() const { return low_visibility.empty(); }
};

ValidationReport validate_sequence(const KeypointSequence& seq, double min_visibility);

}  // namespace aqa

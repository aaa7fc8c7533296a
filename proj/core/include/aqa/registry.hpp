#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aqa {

enum class FeatureSpace { d2, d3 };

enum class FeatureKind { barycentric, joint_angle, limb_center, direction, linkage, tension_ratio };

// What a `direction` feature measures about its line (points[0] - points[1]).
enum class DirectionVariant {
  horizontal,  // angle to +x, in the feature's space
  rotation,    // angle to the depth axis, 3D landmarks, sign-free
  facing,      // boolean: line points toward +x in 2D, remapped to pi/2 or 3pi/2
};

enum class FeatureMode { d2, d3, d2d3 };

std::string_view to_string(FeatureSpace s);
std::string_view to_string(FeatureKind k);
std::string_view to_string(DirectionVariant v);
std::string_view to_string(FeatureMode m);
FeatureMode parse_feature_mode(std::string_view s);

/// A point is the mean of one or more landmarks, e.g. {11, 12} is mid-shoulder.
using PointRef = std::vector<int>;

struct FeatureSpec {
  std::string name;
  FeatureSpace space = FeatureSpace::d2;
  FeatureKind kind = FeatureKind::joint_angle;
  // joint_angle: A, B (vertex), C.  limb_center: 4 polygon vertices.
  // direction: line endpoints.  linkage: A->B vs C->D.
  // tension_ratio: limb pair, shoulder pair.  barycentric: none.
  std::vector<PointRef> points;
  DirectionVariant variant = DirectionVariant::horizontal;
  double threshold = 0.0;

  /// Landmarks read by this feature, including the implicit spine landmarks
  /// of barycentric and limb_center features. Barycenter coefficient
  /// landmarks are not included; they live in BarycenterTable.
  std::vector<int> landmark_indices() const;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FeatureRegistry {
 public:
  FeatureRegistry() = default;
  /// Validates index ranges, point arity per kind and name uniqueness.
  explicit FeatureRegistry(std::vector<FeatureSpec> specs);

  static FeatureRegistry defaults(FeatureMode mode);
  static FeatureRegistry from_json(std::string_view text);
  static FeatureRegistry load(const std::filesystem::path& path);
  std::string to_json() const;

  const std::vector<FeatureSpec>& specs() const { return specs_; }
  std::size_t size() const { return specs_.size(); }
  const FeatureSpec& operator[](std::size_t i) const { return specs_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const FeatureRegistry&, const FeatureRegistry&) = default;

 private:
  std::vector<FeatureSpec> specs_;
};

/// Per-landmark mass fractions for the barycenter estimate.
class BarycenterTable {
 public:
  BarycenterTable();  // default anthropometric table
  /// Throws RegistryError unless fractions sum to 1 within 1e-9.
  explicit BarycenterTable(std::vector<std::pair<int, double>> entries);

  static BarycenterTable from_json(std::string_view text);
  static BarycenterTable load(const std::filesystem::path& path);
  std::string to_json() const;

  const std::vector<std::pair<int, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<int, double>> entries_;
};

}  // namespace aqa

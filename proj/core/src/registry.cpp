#include "aqa/registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "aqa/skeleton.hpp"
#include "json.hpp"

using nlohmann::json;

namespace aqa {

namespace {

using L = LandmarkId;

PointRef pt(L a) { return {idx(a)}; }
PointRef mid(L a, L b) { return {idx(a), idx(b)}; }

std::size_t expected_points(FeatureKind k) {
  switch (k) {
    case FeatureKind::barycentric: return 0;
    case FeatureKind::joint_angle: return 3;
    case FeatureKind::limb_center: return 4;
    case FeatureKind::direction: return 2;
    case FeatureKind::linkage: return 4;
    case FeatureKind::tension_ratio: return 4;
  }
  return 0;
}

std::string prefix(FeatureSpace s) { return s == FeatureSpace::d2 ? "2d." : "3d."; }

void add_barycentric(std::vector<FeatureSpec>& out, FeatureSpace s) {
  out.push_back({prefix(s) + "barycentric", s, FeatureKind::barycentric, {}, {}, 0.0});
}

void add_limb_centers(std::vector<FeatureSpec>& out, FeatureSpace s) {
  const auto kind = FeatureKind::limb_center;
  out.push_back({prefix(s) + "limb_center.left_arm", s, kind,
                 {pt(L::LeftShoulder), pt(L::LeftElbow), pt(L::LeftWrist), pt(L::LeftIndex)}, {}, 0.0});
  out.push_back({prefix(s) + "limb_center.right_arm", s, kind,
                 {pt(L::RightShoulder), pt(L::RightElbow), pt(L::RightWrist), pt(L::RightIndex)}, {}, 0.0});
  out.push_back({prefix(s) + "limb_center.left_leg", s, kind,
                 {pt(L::LeftHip), pt(L::LeftKnee), pt(L::LeftAnkle), pt(L::LeftFootIndex)}, {}, 0.0});
  out.push_back({prefix(s) + "limb_center.right_leg", s, kind,
                 {pt(L::RightHip), pt(L::RightKnee), pt(L::RightAnkle), pt(L::RightFootIndex)}, {}, 0.0});
}

void add_joint_angles(std::vector<FeatureSpec>& out, FeatureSpace s) {
  auto add = [&](const std::string& name, PointRef a, PointRef b, PointRef c) {
    out.push_back({prefix(s) + "angle." + name, s, FeatureKind::joint_angle, {a, b, c}, {}, 0.0});
  };
  add("left_elbow", pt(L::LeftShoulder), pt(L::LeftElbow), pt(L::LeftWrist));
  add("right_elbow", pt(L::RightShoulder), pt(L::RightElbow), pt(L::RightWrist));
  add("left_shoulder", pt(L::LeftElbow), pt(L::LeftShoulder), pt(L::LeftHip));
  add("right_shoulder", pt(L::RightElbow), pt(L::RightShoulder), pt(L::RightHip));
  add("left_hip", pt(L::LeftShoulder), pt(L::LeftHip), pt(L::LeftKnee));
  add("right_hip", pt(L::RightShoulder), pt(L::RightHip), pt(L::RightKnee));
  add("left_knee", pt(L::LeftHip), pt(L::LeftKnee), pt(L::LeftAnkle));
  add("right_knee", pt(L::RightHip), pt(L::RightKnee), pt(L::RightAnkle));
  add("left_ankle", pt(L::LeftKnee), pt(L::LeftAnkle), pt(L::LeftFootIndex));
  add("right_ankle", pt(L::RightKnee), pt(L::RightAnkle), pt(L::RightFootIndex));
  add("neck", pt(L::Nose), mid(L::LeftShoulder, L::RightShoulder), mid(L::LeftHip, L::RightHip));
  add("left_shoulder_girdle", pt(L::RightShoulder), pt(L::LeftShoulder), pt(L::LeftElbow));
  add("right_shoulder_girdle", pt(L::LeftShoulder), pt(L::RightShoulder), pt(L::RightElbow));
}

void add_directions(std::vector<FeatureSpec>& out) {
  const auto s = FeatureSpace::d2;
  const auto kind = FeatureKind::direction;
  const PointRef hipL = pt(L::LeftHip), hipR = pt(L::RightHip);
  const PointRef shL = pt(L::LeftShoulder), shR = pt(L::RightShoulder);
  out.push_back({"2d.direction.shoulder_facing", s, kind, {shL, shR}, DirectionVariant::facing, 0.0});
  out.push_back({"2d.direction.hip_facing", s, kind, {hipL, hipR}, DirectionVariant::facing, 0.0});
  out.push_back({"2d.direction.pelvic_horizontal", s, kind, {hipL, hipR}, DirectionVariant::horizontal, 0.0});
  out.push_back({"2d.direction.pelvic_rotation", s, kind, {hipL, hipR}, DirectionVariant::rotation, 0.0});
  out.push_back({"2d.direction.shoulder_horizontal", s, kind, {shL, shR}, DirectionVariant::horizontal, 0.0});
  out.push_back({"2d.direction.shoulder_rotation", s, kind, {shL, shR}, DirectionVariant::rotation, 0.0});
}

void add_linkage(std::vector<FeatureSpec>& out, FeatureSpace s) {
  auto add = [&](const std::string& name, L a, L b, L c, L d) {
    out.push_back({prefix(s) + "linkage." + name, s, FeatureKind::linkage, {pt(a), pt(b), pt(c), pt(d)}, {}, 0.0});
  };
  add("left_forearm_calf", L::LeftElbow, L::LeftWrist, L::LeftKnee, L::LeftAnkle);
  add("right_forearm_calf", L::RightElbow, L::RightWrist, L::RightKnee, L::RightAnkle);
  add("left_forearm_thigh", L::LeftElbow, L::LeftWrist, L::LeftHip, L::LeftKnee);
  add("right_forearm_thigh", L::RightElbow, L::RightWrist, L::RightHip, L::RightKnee);
}

void add_tension(std::vector<FeatureSpec>& out) {
  const auto kind = FeatureKind::tension_ratio;
  out.push_back({"2d.tension.feet_shoulder", FeatureSpace::d2, kind,
                 {pt(L::LeftAnkle), pt(L::RightAnkle), pt(L::LeftShoulder), pt(L::RightShoulder)}, {}, 0.5});
  out.push_back({"2d.tension.wrists_shoulder", FeatureSpace::d2, kind,
                 {pt(L::LeftWrist), pt(L::RightWrist), pt(L::LeftShoulder), pt(L::RightShoulder)}, {}, 1.5});
}

std::vector<FeatureSpec> default_2d() {
  std::vector<FeatureSpec> out;
  add_barycentric(out, FeatureSpace::d2);
  add_limb_centers(out, FeatureSpace::d2);
  add_joint_angles(out, FeatureSpace::d2);
  add_directions(out);
  add_linkage(out, FeatureSpace::d2);
  add_tension(out);
  return out;
}

std::vector<FeatureSpec> default_3d() {
  std::vector<FeatureSpec> out;
  add_barycentric(out, FeatureSpace::d3);
  add_limb_centers(out, FeatureSpace::d3);
  add_joint_angles(out, FeatureSpace::d3);
  add_linkage(out, FeatureSpace::d3);
  return out;
}

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
             std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw RegistryError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, FeatureSpace>, 2> kSpaces{{
    {"2d", FeatureSpace::d2}, {"3d", FeatureSpace::d3}}};
constexpr std::array<std::pair<std::string_view, FeatureKind>, 6> kKinds{{
    {"barycentric", FeatureKind::barycentric},
    {"joint_angle", FeatureKind::joint_angle},
    {"limb_center", FeatureKind::limb_center},
    {"direction", FeatureKind::direction},
    {"linkage", FeatureKind::linkage},
    {"tension_ratio", FeatureKind::tension_ratio}}};
constexpr std::array<std::pair<std::string_view, DirectionVariant>, 3> kVariants{{
    {"horizontal", DirectionVariant::horizontal},
    {"rotation", DirectionVariant::rotation},
    {"facing", DirectionVariant::facing}}};
constexpr std::array<std::pair<std::string_view, FeatureMode>, 3> kModes{{
    {"2d", FeatureMode::d2}, {"3d", FeatureMode::d3}, {"2d3d", FeatureMode::d2d3}}};

template <typename E, std::size_t N>
std::string_view enum_name(E value, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RegistryError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string_view to_string(FeatureSpace s) { return enum_name(s, kSpaces); }
std::string_view to_string(FeatureKind k) { return enum_name(k, kKinds); }
std::string_view to_string(DirectionVariant v) { return enum_name(v, kVariants); }
std::string_view to_string(FeatureMode m) { return enum_name(m, kModes); }

FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "2d+3d") return FeatureMode::d2d3;
  return parse_enum(s, kModes, "feature mode");
}

std::vector<int> FeatureSpec::landmark_indices() const {
  std::set<int> out;
  for (const auto& p : points) out.insert(p.begin(), p.end());
  if (kind == FeatureKind::barycentric || kind == FeatureKind::limb_center) {
    for (auto id : {L::LeftShoulder, L::RightShoulder, L::LeftHip, L::RightHip}) out.insert(idx(id));
  }
  return {out.begin(), out.end()};
}

FeatureRegistry::FeatureRegistry(std::vector<FeatureSpec> specs) : specs_(std::move(specs)) {
  std::set<std::string> names;
  for (const auto& s : specs_) {
    if (s.name.empty()) throw RegistryError("feature with empty name");
    if (!names.insert(s.name).second) throw RegistryError("duplicate feature name '" + s.name + "'");
    if (s.points.size() != expected_points(s.kind)) {
      throw RegistryError("feature '" + s.name + "' (" + std::string(to_string(s.kind)) + ") needs " +
                          std::to_string(expected_points(s.kind)) + " points, got " +
                          std::to_string(s.points.size()));
    }
    for (const auto& p : s.points) {
      if (p.empty()) throw RegistryError("feature '" + s.name + "' has an empty point");
      for (int i : p) {
        if (i < 0 || i >= static_cast<int>(kLandmarkCount)) {
          throw RegistryError("feature '" + s.name + "' uses landmark " + std::to_string(i) +
                              " outside [0, 32]");
        }
      }
    }
    if (s.kind == FeatureKind::tension_ratio && !(s.threshold > 0.0 && std::isfinite(s.threshold))) {
      throw RegistryError("feature '" + s.name + "' needs a positive threshold");
    }
  }
}

FeatureRegistry FeatureRegistry::defaults(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::d2: return FeatureRegistry(default_2d());
    case FeatureMode::d3: return FeatureRegistry(default_3d());
    case FeatureMode::d2d3: {
      auto specs = default_2d();
      auto more = default_3d();
      specs.insert(specs.end(), more.begin(), more.end());
      return FeatureRegistry(std::move(specs));
    }
  }
  throw RegistryError("unknown feature mode");
}

std::optional<std::size_t> FeatureRegistry::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name == name) return i;
  }
  return std::nullopt;
}

FeatureRegistry FeatureRegistry::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw RegistryError(std::string("malformed registry JSON: ") + e.what());
  }
  if (!doc.is_array()) throw RegistryError("registry must be a JSON array of feature records");
  std::vector<FeatureSpec> specs;
  try {
    for (const auto& rec : doc) {
      FeatureSpec s;
      s.name = rec.at("name").get<std::string>();
      s.space = parse_enum(rec.at("space").get<std::string>(), kSpaces, "space");
      s.kind = parse_enum(rec.at("kind").get<std::string>(), kKinds, "kind");
      s.points = rec.value("points", std::vector<PointRef>{});
      if (rec.contains("variant")) {
        s.variant = parse_enum(rec.at("variant").get<std::string>(), kVariants, "direction variant");
      }
      s.threshold = rec.value("threshold", 0.0);
      specs.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw RegistryError(std::string("invalid registry record: ") + e.what());
  }
  return FeatureRegistry(std::move(specs));
}

FeatureRegistry FeatureRegistry::load(const std::filesystem::path& path) { return from_json(read_file(path)); }

std::string FeatureRegistry::to_json() const {
  // One record per line keeps shipped registry files diffable.
  std::string out = "[\n";
  for (std::size_t k = 0; k < specs_.size(); ++k) {
    const auto& s = specs_[k];
    nlohmann::ordered_json rec;
    rec["name"] = s.name;
    rec["space"] = to_string(s.space);
    rec["kind"] = to_string(s.kind);
    rec["points"] = s.points;
    if (s.kind == FeatureKind::direction) rec["variant"] = to_string(s.variant);
    if (s.kind == FeatureKind::tension_ratio) rec["threshold"] = s.threshold;
    out += "  " + rec.dump() + (k + 1 < specs_.size() ? ",\n" : "\n");
  }
  return out + "]";
}

// Mass fractions mapped onto the landmarks the pose model provides:
// head, shoulders (upper trunk), hips (lower trunk), arm segments, leg segments.
BarycenterTable::BarycenterTable()
    : BarycenterTable(std::vector<std::pair<int, double>>{
          {idx(L::Nose), 0.08},
          {idx(L::LeftShoulder), 0.13}, {idx(L::RightShoulder), 0.13},
          {idx(L::LeftHip), 0.12}, {idx(L::RightHip), 0.12},
          {idx(L::LeftElbow), 0.03}, {idx(L::RightElbow), 0.03},
          {idx(L::LeftWrist), 0.02}, {idx(L::RightWrist), 0.02},
          {idx(L::LeftKnee), 0.10}, {idx(L::RightKnee), 0.10},
          {idx(L::LeftAnkle), 0.06}, {idx(L::RightAnkle), 0.06},
      }) {}

BarycenterTable::BarycenterTable(std::vector<std::pair<int, double>> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw RegistryError("barycenter table is empty");
  std::sort(entries_.begin(), entries_.end());
  double sum = 0.0;
  std::set<int> seen;
  for (const auto& [i, w] : entries_) {
    if (i < 0 || i >= static_cast<int>(kLandmarkCount)) {
      throw RegistryError("barycenter landmark " + std::to_string(i) + " outside [0, 32]");
    }
    if (!seen.insert(i).second) throw RegistryError("barycenter landmark " + std::to_string(i) + " listed twice");
    if (!std::isfinite(w) || w < 0.0) throw RegistryError("barycenter fraction must be finite and non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw RegistryError("barycenter fractions sum to " + std::to_string(sum) + ", expected 1");
  }
}

BarycenterTable BarycenterTable::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw RegistryError(std::string("malformed coefficient JSON: ") + e.what());
  }
  if (!doc.is_object()) throw RegistryError("coefficient table must be a JSON object");
  std::vector<std::pair<int, double>> entries;
  for (const auto& [key, value] : doc.items()) {
    int i = 0;
    try {
      std::size_t used = 0;
      i = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw RegistryError("coefficient key '" + key + "' is not a landmark index");
    }
    if (!value.is_number()) throw RegistryError("coefficient for '" + key + "' is not a number");
    entries.emplace_back(i, value.get<double>());
  }
  return BarycenterTable(std::move(entries));
}

BarycenterTable BarycenterTable::load(const std::filesystem::path& path) { return from_json(read_file(path)); }

std::string BarycenterTable::to_json() const {
  json doc = json::object();
  for (const auto& [i, w] : entries_) doc[std::to_string(i)] = w;
  return doc.dump(2);
}

}  // namespace aqa

#include "aqa/skeleton.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

using nlohmann::json;

namespace aqa {

namespace {

constexpr std::array<std::string_view, kLandmarkCount> kNames = {
    "nose",           "left_eye_inner", "left_eye",        "left_eye_outer", "right_eye_inner",
    "right_eye",      "right_eye_outer", "left_ear",       "right_ear",      "mouth_left",
    "mouth_right",    "left_shoulder",  "right_shoulder",  "left_elbow",     "right_elbow",
    "left_wrist",     "right_wrist",    "left_pinky",      "right_pinky",    "left_index",
    "right_index",    "left_thumb",     "right_thumb",     "left_hip",       "right_hip",
    "left_knee",      "right_knee",     "left_ankle",      "right_ankle",    "left_heel",
    "right_heel",     "left_foot_index", "right_foot_index",
};

std::string count_message(std::size_t got, std::size_t frame) {
  return "landmark count " + std::to_string(got) + " ≠ 33 at frame " + std::to_string(frame);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double number_at(const json& arr, std::size_t k, std::size_t frame) {
  if (k >= arr.size() || !arr[k].is_number()) {
    throw SequenceError("expected number in landmark entry at frame " + std::to_string(frame), frame);
  }
  return arr[k].get<double>();
}

void check_landmark(const Landmark& lm, std::size_t frame, int index) {
  if (!std::isfinite(lm.x) || !std::isfinite(lm.y) || !std::isfinite(lm.z) ||
      !std::isfinite(lm.visibility)) {
    throw SequenceError("non-finite value for landmark " + std::to_string(index) + " at frame " +
                            std::to_string(frame),
                        frame);
  }
  if (lm.visibility < 0.0 || lm.visibility > 1.0) {
    throw SequenceError("visibility out of [0,1] for landmark " + std::to_string(index) +
                            " at frame " + std::to_string(frame),
                        frame);
  }
}

void fill_2d_only(SkeletonFrame& f) {
  for (std::size_t k = 0; k < kLandmarkCount; ++k) {
    f.lm3d[k] = f.lm2d[k];
    f.lm3d[k].z = 0.0;
  }
}

KeypointSequence parse_json(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content.begin(), content.end());
  } catch (const json::parse_error& e) {
    throw SequenceError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SequenceError("malformed JSON: top level must be an object");

  KeypointSequence seq;
  if (!doc.contains("fps") || !doc["fps"].is_number()) {
    throw SequenceError("missing or non-numeric \"fps\"");
  }
  seq.fps = doc["fps"].get<double>();
  if (doc.contains("label") && !doc["label"].is_null()) {
    if (!doc["label"].is_string()) throw SequenceError("\"label\" must be a string or null");
    seq.label = doc["label"].get<std::string>();
  }
  if (doc.contains("source_id")) {
    if (!doc["source_id"].is_string()) throw SequenceError("\"source_id\" must be a string");
    seq.source_id = doc["source_id"].get<std::string>();
  }
  if (!doc.contains("frames") || !doc["frames"].is_array()) {
    throw SequenceError("missing \"frames\" array");
  }

  const auto& frames = doc["frames"];
  std::optional<bool> has3d;
  seq.frames.reserve(frames.size());
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const auto& jf = frames[fi];
    if (!jf.is_object()) throw SequenceError("frame is not an object at frame " + std::to_string(fi), fi);
    if (!jf.contains("t") || !jf["t"].is_number()) {
      throw SequenceError("missing timestamp at frame " + std::to_string(fi), fi);
    }
    if (!jf.contains("lm2d") || !jf["lm2d"].is_array()) {
      throw SequenceError("missing lm2d at frame " + std::to_string(fi), fi);
    }
    SkeletonFrame frame;
    frame.t = jf["t"].get<double>();

    const auto& l2 = jf["lm2d"];
    if (l2.size() != kLandmarkCount) throw SequenceError(count_message(l2.size(), fi), fi);
    for (std::size_t k = 0; k < kLandmarkCount; ++k) {
      if (!l2[k].is_array() || l2[k].size() != 3) {
        throw SequenceError("lm2d entry must be [x,y,vis] at frame " + std::to_string(fi), fi);
      }
      frame.lm2d[k] = {number_at(l2[k], 0, fi), number_at(l2[k], 1, fi), 0.0, number_at(l2[k], 2, fi)};
    }

    const bool frame_has3d = jf.contains("lm3d") && !jf["lm3d"].is_null();
    if (has3d && *has3d != frame_has3d) {
      throw SequenceError("lm3d present on some frames but not others at frame " + std::to_string(fi), fi);
    }
    has3d = frame_has3d;
    if (frame_has3d) {
      const auto& l3 = jf["lm3d"];
      if (!l3.is_array()) throw SequenceError("lm3d must be an array at frame " + std::to_string(fi), fi);
      if (l3.size() != kLandmarkCount) throw SequenceError(count_message(l3.size(), fi), fi);
      for (std::size_t k = 0; k < kLandmarkCount; ++k) {
        if (!l3[k].is_array() || l3[k].size() != 3) {
          throw SequenceError("lm3d entry must be [x,y,z] at frame " + std::to_string(fi), fi);
        }
        frame.lm3d[k] = {number_at(l3[k], 0, fi), number_at(l3[k], 1, fi), number_at(l3[k], 2, fi),
                         frame.lm2d[k].visibility};
      }
    } else {
      fill_2d_only(frame);
    }
    seq.frames.push_back(frame);
  }
  seq.two_d_only = has3d.has_value() && !*has3d;
  check_sequence(seq);
  return seq;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  T value{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw SequenceError("malformed CSV number '" + std::string(field) + "' on line " +
                        std::to_string(line_no));
  }
  return value;
}

KeypointSequence parse_csv(std::string_view content) {
  KeypointSequence seq;
  bool header_seen = false;
  std::optional<bool> has3d;
  std::vector<std::vector<bool>> seen;  // per frame, which landmark rows arrived
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = trim(content.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == content.size()) break;
      continue;
    }

    if (!header_seen && line.front() == '#') {
      line.remove_prefix(1);
      line = trim(line);
      auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;
      auto key = trim(line.substr(0, eq));
      auto value = trim(line.substr(eq + 1));
      if (key == "fps") {
        seq.fps = parse_number<double>(value, line_no);
      } else if (key == "label") {
        seq.label = std::string(value);
      } else if (key == "source_id") {
        seq.source_id = std::string(value);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "frame,t,idx,x2,y2,vis,x3,y3,z3") {
        throw SequenceError("malformed CSV header: expected frame,t,idx,x2,y2,vis,x3,y3,z3");
      }
      header_seen = true;
      continue;
    }

    auto fields = split(line, ',');
    if (fields.size() != 9) {
      throw SequenceError("malformed CSV row on line " + std::to_string(line_no) + ": expected 9 fields");
    }
    const auto fi = parse_number<std::size_t>(fields[0], line_no);
    const auto t = parse_number<double>(fields[1], line_no);
    const auto k = parse_number<int>(fields[2], line_no);
    if (fi > seq.frames.size()) {
      throw SequenceError("frame indices not contiguous at frame " + std::to_string(fi), fi);
    }
    if (fi + 1 < seq.frames.size()) {
      throw SequenceError("rows for frame " + std::to_string(fi) + " are not contiguous", fi);
    }
    if (fi == seq.frames.size()) {
      if (!seq.frames.empty()) {
        auto got = static_cast<std::size_t>(std::count(seen.back().begin(), seen.back().end(), true));
        if (got != kLandmarkCount) throw SequenceError(count_message(got, fi - 1), fi - 1);
      }
      SkeletonFrame frame;
      frame.t = t;
      seq.frames.push_back(frame);
      seen.emplace_back(kLandmarkCount, false);
    }
    auto& frame = seq.frames.back();
    if (t != frame.t) {
      throw SequenceError("inconsistent timestamp within frame " + std::to_string(fi), fi);
    }
    if (k < 0 || k >= static_cast<int>(kLandmarkCount)) {
      throw SequenceError("landmark index " + std::to_string(k) + " out of range at frame " +
                              std::to_string(fi),
                          fi);
    }
    if (seen.back()[k]) {
      throw SequenceError("duplicate landmark " + std::to_string(k) + " at frame " + std::to_string(fi), fi);
    }
    seen.back()[k] = true;

    Landmark l2{parse_number<double>(fields[3], line_no), parse_number<double>(fields[4], line_no), 0.0,
                parse_number<double>(fields[5], line_no)};
    frame.lm2d[k] = l2;
    const bool row_has3d = !trim(fields[6]).empty() || !trim(fields[7]).empty() || !trim(fields[8]).empty();
    if (has3d && *has3d != row_has3d) {
      throw SequenceError("3D columns present on some rows but not others at frame " + std::to_string(fi), fi);
    }
    has3d = row_has3d;
    if (row_has3d) {
      frame.lm3d[k] = {parse_number<double>(fields[6], line_no), parse_number<double>(fields[7], line_no),
                       parse_number<double>(fields[8], line_no), l2.visibility};
    } else {
      frame.lm3d[k] = l2;
    }
  }
  if (!header_seen) throw SequenceError("malformed CSV: missing header");
  if (!seq.frames.empty()) {
    auto got = static_cast<std::size_t>(std::count(seen.back().begin(), seen.back().end(), true));
    if (got != kLandmarkCount) throw SequenceError(count_message(got, seq.frames.size() - 1), seq.frames.size() - 1);
  }
  seq.two_d_only = has3d.has_value() && !*has3d;
  check_sequence(seq);
  return seq;
}

std::string serialize_json(const KeypointSequence& seq) {
  json doc;
  doc["fps"] = seq.fps;
  doc["label"] = seq.label ? json(*seq.label) : json(nullptr);
  doc["source_id"] = seq.source_id;
  json frames = json::array();
  for (const auto& f : seq.frames) {
    json jf;
    jf["t"] = f.t;
    json l2 = json::array();
    for (const auto& lm : f.lm2d) l2.push_back({lm.x, lm.y, lm.visibility});
    jf["lm2d"] = std::move(l2);
    if (seq.two_d_only) {
      jf["lm3d"] = nullptr;
    } else {
      json l3 = json::array();
      for (const auto& lm : f.lm3d) l3.push_back({lm.x, lm.y, lm.z});
      jf["lm3d"] = std::move(l3);
    }
    frames.push_back(std::move(jf));
  }
  doc["frames"] = std::move(frames);
  return doc.dump();
}

std::string serialize_csv(const KeypointSequence& seq) {
  std::string out;
  out += "# fps=" + format_double(seq.fps) + "\n";
  if (seq.label) out += "# label=" + *seq.label + "\n";
  if (!seq.source_id.empty()) out += "# source_id=" + seq.source_id + "\n";
  out += "frame,t,idx,x2,y2,vis,x3,y3,z3\n";
  for (std::size_t fi = 0; fi < seq.frames.size(); ++fi) {
    const auto& f = seq.frames[fi];
    const auto t = format_double(f.t);
    for (std::size_t k = 0; k < kLandmarkCount; ++k) {
      const auto& a = f.lm2d[k];
      out += std::to_string(fi) + ',' + t + ',' + std::to_string(k) + ',' + format_double(a.x) + ',' +
             format_double(a.y) + ',' + format_double(a.visibility) + ',';
      if (seq.two_d_only) {
        out += ",,\n";
      } else {
        const auto& b = f.lm3d[k];
        out += format_double(b.x) + ',' + format_double(b.y) + ',' + format_double(b.z) + '\n';
      }
    }
  }
  return out;
}

}  // namespace

std::string_view landmark_name(int index) {
  if (index < 0 || index >= static_cast<int>(kLandmarkCount)) return "unknown";
  return kNames[static_cast<std::size_t>(index)];
}

int mirror_landmark(int index) {
  if (index <= 0 || index >= static_cast<int>(kLandmarkCount)) return index;
  if (index <= 3) return index + 3;   // left eye group -> right eye group
  if (index <= 6) return index - 3;
  // 7..32 alternate left (odd) / right (even)
  return (index % 2 == 1) ? index + 1 : index - 1;
}

void check_sequence(const KeypointSequence& seq) {
  if (!std::isfinite(seq.fps) || seq.fps <= 0.0) throw SequenceError("fps must be a positive finite number");
  if (seq.frames.empty()) throw SequenceError("sequence has no frames");
  for (std::size_t fi = 0; fi < seq.frames.size(); ++fi) {
    const auto& f = seq.frames[fi];
    if (!std::isfinite(f.t)) throw SequenceError("non-finite timestamp at frame " + std::to_string(fi), fi);
    if (fi > 0 && !(f.t > seq.frames[fi - 1].t)) {
      throw SequenceError("non-increasing timestamp at frame " + std::to_string(fi), fi);
    }
    for (std::size_t k = 0; k < kLandmarkCount; ++k) {
      check_landmark(f.lm2d[k], fi, static_cast<int>(k));
      check_landmark(f.lm3d[k], fi, static_cast<int>(k));
    }
  }
}

KeypointSequence parse_sequence(std::string_view content, SequenceFormat format) {
  return format == SequenceFormat::csv ? parse_csv(content) : parse_json(content);
}

std::string serialize_sequence(const KeypointSequence& seq, SequenceFormat format) {
  return format == SequenceFormat::csv ? serialize_csv(seq) : serialize_json(seq);
}

namespace {
SequenceFormat format_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? SequenceFormat::csv : SequenceFormat::json;
}
}  // namespace

KeypointSequence load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SequenceError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto seq = parse_sequence(buf.str(), format_for(path));
    if (seq.source_id.empty()) seq.source_id = path.stem().string();
    return seq;
  } catch (const SequenceError& e) {
    throw SequenceError(path.string() + ": " + e.what(), e.frame());
  }
}

void save_sequence(const KeypointSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_sequence(seq, format_for(path));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ValidationReport validate_sequence(const KeypointSequence& seq, double min_visibility) {
  ValidationReport report;
  for (std::size_t fi = 0; fi < seq.frames.size(); ++fi) {
    ValidationReport::FrameEntry entry{fi, {}};
    for (std::size_t k = 0; k < kLandmarkCount; ++k) {
      if (seq.frames[fi].lm2d[k].visibility < min_visibility) entry.landmarks.push_back(static_cast<int>(k));
    }
    if (!entry.landmarks.empty()) report.low_visibility.push_back(std::move(entry));
  }
  return report;
}

}  // namespace aqa

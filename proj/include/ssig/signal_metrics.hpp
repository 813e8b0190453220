#pragma once

// Converts a fused pose series plus facial-expression and iris inputs into
// the 23 named social-signal channels.
//
// Coordinate conventions (the upstream extractor's image convention):
//   +x: the user's left, +y: downward, +z: forward toward the agent.
// Derived sign conventions, used consistently below and in the docs:
//   heading positive = turned toward the user's left,
//   head pitch = atan2(-f_y, |f_xz|) with f = nose - mid(ears),
//   head tilt positive = left ear raised,
//   trunk pitch positive = leaning forward,
//   trunk tilt positive = left shoulder lowered.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/pose_ingest.hpp"

namespace ssig {

enum class Unit { degrees, normalized, units_per_s, millimeters, probability };

inline constexpr int kChannelCount = 23;
inline constexpr int kBodyChannelCount = 16;
inline constexpr int kFaceChannelCount = 7;

inline constexpr std::array<const char*, kChannelCount> kChannelNames = {
    "head_heading",  "head_pitch",    "head_tilt",    "trunk_heading", "trunk_pitch",
    "trunk_tilt",    "body_width",    "body_height",  "body_depth",    "velocity_x",
    "velocity_y",    "velocity_z",    "head_vertical", "head_sagittal", "arm_opening",
    "distance",      "face_happiness", "face_anger",   "face_disgust",  "face_fear",
    "face_sadness",  "face_surprise", "face_neutral"};

inline int channel_index(std::string_view name) {
  for (int i = 0; i < kChannelCount; ++i)
    if (name == kChannelNames[i]) return i;
  return -1;
}

inline Unit channel_unit(int index) {
  switch (index) {
    case 0:
    case 1:
    case 2:
    case 3:
    case 4:
    case 5:
      return Unit::degrees;
    case 6:
    case 7:
    case 8:
      return Unit::normalized;
    case 9:
    case 10:
    case 11:
      return Unit::units_per_s;
    case 12:
    case 13:
      return Unit::normalized;
    case 14:
      return Unit::degrees;
    case 15:
      return Unit::millimeters;
    default:
      return Unit::probability;
  }
}

struct SignalChannel {
  std::string name;
  Unit unit = Unit::normalized;
  std::vector<double> values;
  std::vector<std::uint8_t> missing;

  std::size_t size() const { return values.size(); }
  void push(std::optional<double> v) {
    values.push_back(v.value_or(0.0));
    missing.push_back(v ? 0 : 1);
  }
  bool all_missing() const {
    for (auto m : missing)
      if (!m) return false;
    return true;
  }
  // Valid samples, in order, with the missing ones dropped.
  std::vector<double> valid_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!missing[i]) out.push_back(values[i]);
    return out;
  }
};

struct ChannelSet {
  std::string session_id;
  std::vector<SignalChannel> channels;  // exactly 23, canonical order

  std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
  const SignalChannel& channel(std::string_view name) const {
    const int i = channel_index(name);
    if (i < 0) throw Error("unknown channel '" + std::string(name) + "'");
    return channels[static_cast<std::size_t>(i)];
  }
};

struct FaceFrame {
  double timestamp_ms = 0.0;
  // happiness, anger, disgust, fear, sadness, surprise, neutral
  std::array<double, kFaceChannelCount> scores{};
};

struct OrientationAngles {
  double heading = 0.0;
  double pitch = 0.0;
  double tilt = 0.0;
};

namespace detail {
inline bool valid(const PoseFrame& f, int i) { return f.valid[static_cast<std::size_t>(i)] != 0; }
inline const Vec3& pt(const PoseFrame& f, int i) { return f.pts[static_cast<std::size_t>(i)]; }
}  // namespace detail

inline std::optional<OrientationAngles> head_orientation(const PoseFrame& f) {
  using namespace detail;
  if (!valid(f, lm::nose) || !valid(f, lm::left_ear) || !valid(f, lm::right_ear))
    return std::nullopt;
  const Vec3 le = pt(f, lm::left_ear);
  const Vec3 re = pt(f, lm::right_ear);
  const Vec3 mid = (le + re) * 0.5;
  const Vec3 fwd = pt(f, lm::nose) - mid;
  const Vec3 ear = le - re;
  OrientationAngles a;
  a.heading = normalize_degrees(to_degrees(std::atan2(fwd.x, fwd.z)));
  a.pitch = normalize_degrees(to_degrees(std::atan2(-fwd.y, std::hypot(fwd.x, fwd.z))));
  a.tilt = normalize_degrees(to_degrees(std::atan2(-ear.y, std::hypot(ear.x, ear.z))));
  return a;
}

inline std::optional<OrientationAngles> trunk_orientation(const PoseFrame& f) {
  using namespace detail;
  if (!valid(f, lm::left_shoulder) || !valid(f, lm::right_shoulder) || !valid(f, lm::left_hip) ||
      !valid(f, lm::right_hip))
    return std::nullopt;
  const Vec3 ls = pt(f, lm::left_shoulder);
  const Vec3 rs = pt(f, lm::right_shoulder);
  const Vec3 lh = pt(f, lm::left_hip);
  const Vec3 rh = pt(f, lm::right_hip);
  const Vec3 shoulder = ls - rs;
  const Vec3 mid_shoulder = (ls + rs) * 0.5;
  const Vec3 mid_hip = (lh + rh) * 0.5;
  const Vec3 up = mid_shoulder - mid_hip;  // points from hips to shoulders
  OrientationAngles a;
  // Normal of the shoulder line in the horizontal plane; facing forward -> 0.
  a.heading = normalize_degrees(to_degrees(std::atan2(-shoulder.z, shoulder.x)));
  a.pitch = normalize_degrees(to_degrees(std::atan2(up.z, -up.y)));
  a.tilt = normalize_degrees(to_degrees(std::atan2(shoulder.y, std::hypot(shoulder.x, shoulder.z))));
  return a;
}

inline std::optional<Vec3> body_dimensions(const PoseFrame& f) {
  int n = 0;
  Vec3 lo{0, 0, 0}, hi{0, 0, 0};
  for (int i = 0; i < kLandmarkCount; ++i) {
    if (!detail::valid(f, i)) continue;
    const Vec3& p = detail::pt(f, i);
    if (n == 0) {
      lo = hi = p;
    } else {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      lo.z = std::min(lo.z, p.z);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
      hi.z = std::max(hi.z, p.z);
    }
    ++n;
  }
  if (n < 2) return std::nullopt;
  return Vec3{hi.x - lo.x, hi.y - lo.y, hi.z - lo.z};
}

inline std::optional<Vec3> pose_centroid(const PoseFrame& f) {
  Vec3 acc{};
  int n = 0;
  for (int i = 0; i < kLandmarkCount; ++i) {
    if (!detail::valid(f, i)) continue;
    acc += detail::pt(f, i);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return acc / static_cast<double>(n);
}

// Centroid velocity in units/s: central difference over the 30 Hz grid in the
// interior, one-sided at the boundaries. A sample is missing when its own or
// any required neighbouring centroid is missing.
inline std::array<std::vector<std::optional<double>>, 3> body_velocity(const FusedPoseSeries& s) {
  const std::size_t n = s.size();
  std::vector<std::optional<Vec3>> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = pose_centroid(s.frames[i]);
  std::array<std::vector<std::optional<double>>, 3> out;
  for (auto& v : out) v.assign(n, std::nullopt);
  if (n < 2) return out;
  const auto set = [&](std::size_t i, const Vec3& d) {
    out[0][i] = d.x;
    out[1][i] = d.y;
    out[2][i] = d.z;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!c[i]) continue;
    if (i == 0) {
      if (c[1]) set(i, (*c[1] - *c[0]) * kFps);
    } else if (i == n - 1) {
      if (c[n - 2]) set(i, (*c[n - 1] - *c[n - 2]) * kFps);
    } else {
      if (c[i - 1] && c[i + 1]) set(i, (*c[i + 1] - *c[i - 1]) * (kFps / 2.0));
    }
  }
  return out;
}

inline std::optional<std::pair<double, double>> head_position(const PoseFrame& f) {
  using namespace detail;
  if (!valid(f, lm::nose) || !valid(f, lm::left_shoulder) || !valid(f, lm::right_shoulder))
    return std::nullopt;
  const Vec3 nose = pt(f, lm::nose);
  const Vec3 mid = (pt(f, lm::left_shoulder) + pt(f, lm::right_shoulder)) * 0.5;
  return std::make_pair(nose.y - mid.y, nose.z - mid.z);
}

// Mean angle between the trunk axis (mid-shoulder -> mid-hip) and the upper
// arm (shoulder -> elbow), over the sides whose landmarks are available.
inline std::optional<double> arm_opening(const PoseFrame& f) {
  using namespace detail;
  if (!valid(f, lm::left_shoulder) || !valid(f, lm::right_shoulder) || !valid(f, lm::left_hip) ||
      !valid(f, lm::right_hip))
    return std::nullopt;
  const Vec3 mid_shoulder = (pt(f, lm::left_shoulder) + pt(f, lm::right_shoulder)) * 0.5;
  const Vec3 mid_hip = (pt(f, lm::left_hip) + pt(f, lm::right_hip)) * 0.5;
  const Vec3 trunk = mid_hip - mid_shoulder;
  const double trunk_norm = trunk.norm();
  if (trunk_norm <= 0.0) return std::nullopt;
  double sum = 0.0;
  int sides = 0;
  const auto side = [&](int shoulder, int elbow) {
    if (!valid(f, shoulder) || !valid(f, elbow)) return;
    const Vec3 arm = pt(f, elbow) - pt(f, shoulder);
    const double arm_norm = arm.norm();
    if (arm_norm <= 0.0) return;
    const double c = std::clamp(trunk.dot(arm) / (trunk_norm * arm_norm), -1.0, 1.0);
    sum += to_degrees(std::acos(c));
    ++sides;
  };
  side(lm::left_shoulder, lm::left_elbow);
  side(lm::right_shoulder, lm::right_elbow);
  if (sides == 0) return std::nullopt;
  return sum / sides;
}

inline constexpr double kIrisDiameterMm = 11.7;  // anthropometric constant

inline std::optional<double> estimate_distance(std::optional<double> iris_diameter_px,
                                               double focal_px) {
  if (!iris_diameter_px || *iris_diameter_px <= 0.0 || focal_px <= 0.0) return std::nullopt;
  return focal_px * kIrisDiameterMm / *iris_diameter_px;
}

// Builds the full 23-channel set for one session. Face frames are aligned to
// the 30 Hz pose grid by nearest neighbour; iris diameters are expected per
// pose frame (from the resampled front-camera track).
inline ChannelSet assemble_channels(std::string session_id, const FusedPoseSeries& poses,
                                    std::span<const FaceFrame> faces,
                                    std::span<const std::optional<double>> iris_px,
                                    double focal_px) {
  if (poses.size() == 0) throw Error("assemble_channels: empty pose series");
  const std::size_t n = poses.size();
  ChannelSet cs;
  cs.session_id = std::move(session_id);
  cs.channels.resize(kChannelCount);
  for (int i = 0; i < kChannelCount; ++i) {
    cs.channels[i].name = kChannelNames[i];
    cs.channels[i].unit = channel_unit(i);
    cs.channels[i].values.reserve(n);
    cs.channels[i].missing.reserve(n);
  }

  const auto velocity = body_velocity(poses);
  for (std::size_t i = 0; i < n; ++i) {
    const PoseFrame& f = poses.frames[i];
    const auto head = head_orientation(f);
    const auto trunk = trunk_orientation(f);
    const auto dims = body_dimensions(f);
    const auto pos = head_position(f);
    const auto arms = arm_opening(f);
    cs.channels[0].push(head ? std::optional(head->heading) : std::nullopt);
    cs.channels[1].push(head ? std::optional(head->pitch) : std::nullopt);
    cs.channels[2].push(head ? std::optional(head->tilt) : std::nullopt);
    cs.channels[3].push(trunk ? std::optional(trunk->heading) : std::nullopt);
    cs.channels[4].push(trunk ? std::optional(trunk->pitch) : std::nullopt);
    cs.channels[5].push(trunk ? std::optional(trunk->tilt) : std::nullopt);
    cs.channels[6].push(dims ? std::optional(dims->x) : std::nullopt);
    cs.channels[7].push(dims ? std::optional(dims->y) : std::nullopt);
    cs.channels[8].push(dims ? std::optional(dims->z) : std::nullopt);
    cs.channels[9].push(velocity[0][i]);
    cs.channels[10].push(velocity[1][i]);
    cs.channels[11].push(velocity[2][i]);
    cs.channels[12].push(pos ? std::optional(pos->first) : std::nullopt);
    cs.channels[13].push(pos ? std::optional(pos->second) : std::nullopt);
    cs.channels[14].push(arms);
    cs.channels[15].push(
        estimate_distance(i < iris_px.size() ? iris_px[i] : std::nullopt, focal_px));
  }

  // Face channels by nearest-neighbour timestamp match.
  std::size_t fi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = poses.timestamp_ms(i);
    if (faces.empty()) {
      for (int c = 0; c < kFaceChannelCount; ++c) cs.channels[16 + c].push(std::nullopt);
      continue;
    }
    while (fi + 1 < faces.size() &&
           std::abs(faces[fi + 1].timestamp_ms - t) <= std::abs(faces[fi].timestamp_ms - t))
      ++fi;
    for (int c = 0; c < kFaceChannelCount; ++c)
      cs.channels[16 + c].push(faces[fi].scores[static_cast<std::size_t>(c)]);
  }
  return cs;
}

}  // namespace ssig

#pragma once

// Camera-side ingestion: landmark-stream parsing, resampling onto the shared
// 30 Hz clock, rotation into the common body frame, and multi-camera fusion.
//
// Landmark stream format (one record per line, comma separated):
//   session_id,camera,timestamp_ms,x0,y0,z0,v0,...,x32,y32,z32,v32[,iris_px]
// camera is one of front|left|right; timestamps must be strictly increasing
// per (session, camera). The optional trailing field is the iris diameter in
// pixels as seen by the front camera.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssig/common.hpp"

namespace ssig {

enum class CameraId { front = 0, left = 1, right = 2 };

inline const char* to_string(CameraId id) {
  switch (id) {
    case CameraId::front: return "front";
    case CameraId::left: return "left";
    case CameraId::right: return "right";
  }
  return "?";
}

inline std::optional<CameraId> camera_from_string(std::string_view s) {
  if (s == "front") return CameraId::front;
  if (s == "left") return CameraId::left;
  if (s == "right") return CameraId::right;
  return std::nullopt;
}

inline constexpr int kLandmarkCount = 33;

// Named indices of the upstream extractor's 33-point pose convention.
namespace lm {
inline constexpr int nose = 0;
inline constexpr int left_ear = 7;
inline constexpr int right_ear = 8;
inline constexpr int left_shoulder = 11;
inline constexpr int right_shoulder = 12;
inline constexpr int left_elbow = 13;
inline constexpr int right_elbow = 14;
inline constexpr int left_wrist = 15;
inline constexpr int right_wrist = 16;
inline constexpr int left_hip = 23;
inline constexpr int right_hip = 24;
}  // namespace lm

struct LandmarkPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double visibility = 0.0;

  Vec3 pos() const { return {x, y, z}; }
};

struct CameraFrame {
  CameraId camera_id = CameraId::front;
  double timestamp_ms = 0.0;
  std::array<LandmarkPoint, kLandmarkCount> landmarks{};
  std::optional<double> iris_diameter_px;
};

struct ParsedRecord {
  std::string session_id;
  CameraFrame frame;
};

// One session's per-camera tracks, indexed by CameraId.
struct SessionTracks {
  std::string session_id;
  std::array<std::vector<CameraFrame>, 3> tracks;
};

inline std::vector<ParsedRecord> parse_landmark_stream(std::istream& in) {
  std::vector<ParsedRecord> out;
  // last timestamp per (session, camera) for the monotonicity check
  std::map<std::pair<std::string, CameraId>, double> last_ts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto fields = split_fields(sv);
    if (fields.size() != 3 + 4 * kLandmarkCount && fields.size() != 4 + 4 * kLandmarkCount) {
      if (fields.size() > 3 && (fields.size() - 3) % 4 == 0)
        throw Error("line " + std::to_string(line_no) + ": landmark count mismatch, got " +
                    std::to_string((fields.size() - 3) / 4) + " landmarks, expected 33");
      throw Error("line " + std::to_string(line_no) + ": malformed record with " +
                  std::to_string(fields.size()) + " fields");
    }
    ParsedRecord rec;
    rec.session_id = std::string(strip(fields[0]));
    if (rec.session_id.empty())
      throw Error("line " + std::to_string(line_no) + ": empty session id");
    const auto cam = camera_from_string(strip(fields[1]));
    if (!cam)
      throw Error("line " + std::to_string(line_no) + ": unknown camera id '" +
                  std::string(fields[1]) + "'");
    rec.frame.camera_id = *cam;
    if (!try_parse_double(strip(fields[2]), rec.frame.timestamp_ms))
      throw Error("line " + std::to_string(line_no) + ": bad timestamp '" +
                  std::string(fields[2]) + "'");
    for (int i = 0; i < kLandmarkCount; ++i) {
      LandmarkPoint& p = rec.frame.landmarks[i];
      double v[4];
      for (int j = 0; j < 4; ++j) {
        if (!try_parse_double(strip(fields[3 + 4 * i + j]), v[j]))
          throw Error("line " + std::to_string(line_no) + ": bad number in landmark " +
                      std::to_string(i));
      }
      p.x = v[0];
      p.y = v[1];
      p.z = v[2];
      p.visibility = v[3];
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw Error("line " + std::to_string(line_no) + ": non-finite coordinate in landmark " +
                    std::to_string(i));
      if (!(p.visibility >= 0.0 && p.visibility <= 1.0))
        throw Error("line " + std::to_string(line_no) + ": visibility out of [0,1] in landmark " +
                    std::to_string(i));
    }
    if (fields.size() == 4 + 4 * kLandmarkCount) {
      double iris = 0.0;
      if (!try_parse_double(strip(fields.back()), iris))
        throw Error("line " + std::to_string(line_no) + ": bad iris diameter");
      rec.frame.iris_diameter_px = iris;
    }
    const auto key = std::make_pair(rec.session_id, rec.frame.camera_id);
    const auto it = last_ts.find(key);
    if (it != last_ts.end() && rec.frame.timestamp_ms <= it->second)
      throw Error("line " + std::to_string(line_no) + ": non-monotone timestamp for session " +
                  rec.session_id + " camera " + to_string(rec.frame.camera_id));
    last_ts[key] = rec.frame.timestamp_ms;
    out.push_back(std::move(rec));
  }
  return out;
}

// Groups records per session (sessions sorted by id; per-camera order preserved,
// which the parser has already verified to be chronological).
inline std::vector<SessionTracks> group_by_session(std::vector<ParsedRecord>&& records) {
  std::map<std::string, SessionTracks> by_id;
  for (auto& rec : records) {
    auto& st = by_id[rec.session_id];
    st.session_id = rec.session_id;
    st.tracks[static_cast<int>(rec.frame.camera_id)].push_back(rec.frame);
  }
  std::vector<SessionTracks> out;
  out.reserve(by_id.size());
  for (auto& [id, st] : by_id) out.push_back(std::move(st));
  return out;
}

// Resamples one camera track onto the global 30 Hz grid t_k = k * (1000/30) ms.
// Each output sample is the linear interpolation of the two bracketing input
// frames; visibility (and the iris diameter, when both ends carry one) is
// interpolated the same way. Only grid points inside [first, last] input
// timestamps are emitted; there is no extrapolation.
inline std::vector<CameraFrame> resample_to_30fps(const std::vector<CameraFrame>& frames) {
  if (frames.size() < 2) throw Error("resample_to_30fps: need at least 2 frames");
  constexpr double kEpsMs = 1e-6;
  const double t0 = frames.front().timestamp_ms;
  const double t1 = frames.back().timestamp_ms;
  const auto k_start = static_cast<std::int64_t>(std::ceil((t0 - kEpsMs) / kFrameMs));
  const auto k_end = static_cast<std::int64_t>(std::floor((t1 + kEpsMs) / kFrameMs));
  std::vector<CameraFrame> out;
  if (k_end < k_start) return out;
  out.reserve(static_cast<std::size_t>(k_end - k_start + 1));
  std::size_t seg = 0;  // frames[seg], frames[seg+1] bracket the target time
  for (std::int64_t k = k_start; k <= k_end; ++k) {
    const double t = static_cast<double>(k) * kFrameMs;
    while (seg + 2 < frames.size() && frames[seg + 1].timestamp_ms < t) ++seg;
    const CameraFrame& a = frames[seg];
    const CameraFrame& b = frames[seg + 1];
    const double span = b.timestamp_ms - a.timestamp_ms;
    double alpha = span > 0.0 ? (t - a.timestamp_ms) / span : 0.0;
    alpha = std::clamp(alpha, 0.0, 1.0);
    CameraFrame f;
    f.camera_id = a.camera_id;
    f.timestamp_ms = t;
    if (alpha == 0.0) {
      f.landmarks = a.landmarks;
      f.iris_diameter_px = a.iris_diameter_px;
    } else if (alpha == 1.0) {
      f.landmarks = b.landmarks;
      f.iris_diameter_px = b.iris_diameter_px;
    } else {
      for (int i = 0; i < kLandmarkCount; ++i) {
        const LandmarkPoint& pa = a.landmarks[i];
        const LandmarkPoint& pb = b.landmarks[i];
        LandmarkPoint& p = f.landmarks[i];
        p.x = pa.x + alpha * (pb.x - pa.x);
        p.y = pa.y + alpha * (pb.y - pa.y);
        p.z = pa.z + alpha * (pb.z - pa.z);
        p.visibility = pa.visibility + alpha * (pb.visibility - pa.visibility);
      }
      if (a.iris_diameter_px && b.iris_diameter_px)
        f.iris_diameter_px = *a.iris_diameter_px + alpha * (*b.iris_diameter_px - *a.iris_diameter_px);
    }
    out.push_back(std::move(f));
  }
  return out;
}

struct CameraCalibration {
  CameraId camera_id = CameraId::front;
  // Maps camera-frame coordinates into the common body frame: v' = R * v.
  std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  double focal_px = 0.0;  // front camera only, used for distance estimation
};

inline void validate_rotation(const CameraCalibration& cal) {
  const auto& r = cal.rotation;
  // R^T R = I
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += r[k][i] * r[k][j];
      const double expect = i == j ? 1.0 : 0.0;
      if (std::abs(dot - expect) > 1e-9)
        throw Error(std::string("calibration for camera ") + to_string(cal.camera_id) +
                    ": rotation is not orthonormal");
    }
  }
  const double det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
                     r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
                     r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
  if (std::abs(det - 1.0) > 1e-9)
    throw Error(std::string("calibration for camera ") + to_string(cal.camera_id) +
                ": rotation determinant is not +1");
}

inline Vec3 apply_rotation(const std::array<std::array<double, 3>, 3>& r, const Vec3& v) {
  return {r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
          r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
          r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z};
}

inline std::vector<CameraFrame> rotate_camera_frame(std::vector<CameraFrame> frames,
                                                    const CameraCalibration& cal) {
  if (!frames.empty() && frames.front().camera_id != cal.camera_id)
    throw Error("rotate_camera_frame: calibration camera id does not match track");
  validate_rotation(cal);
  for (CameraFrame& f : frames) {
    for (LandmarkPoint& p : f.landmarks) {
      const Vec3 v = apply_rotation(cal.rotation, p.pos());
      p.x = v.x;
      p.y = v.y;
      p.z = v.z;
    }
  }
  return frames;
}

struct PoseFrame {
  std::array<Vec3, kLandmarkCount> pts{};
  std::array<std::uint8_t, kLandmarkCount> valid{};
};

struct FusedPoseSeries {
  std::int64_t start_frame = 0;  // index on the global 30 Hz grid
  std::vector<PoseFrame> frames;

  std::size_t size() const { return frames.size(); }
  double timestamp_ms(std::size_t i) const {
    return static_cast<double>(start_frame + static_cast<std::int64_t>(i)) * kFrameMs;
  }
};

struct FuseOptions {
  double v_min = 0.5;   // visibility gate
  double d_max = 0.15;  // max distance from the weighted centroid, normalized units
};

// Combines up to three resampled, rotated camera tracks into one pose per
// frame. Per landmark and frame: observations below v_min are dropped, then
// observations farther than d_max from the visibility-weighted centroid of
// the survivors are dropped, and the remainder is averaged with visibility
// weights. Cameras are always accumulated in front, left, right order, so the
// result does not depend on the order in which tracks are handed in.
inline FusedPoseSeries fuse_poses(const std::vector<std::vector<CameraFrame>>& tracks,
                                  const FuseOptions& opt = {}) {
  std::array<const std::vector<CameraFrame>*, 3> by_cam{nullptr, nullptr, nullptr};
  int supplied = 0;
  for (const auto& t : tracks) {
    if (t.empty()) continue;
    by_cam[static_cast<int>(t.front().camera_id)] = &t;
    ++supplied;
  }
  if (supplied == 0) throw Error("fuse_poses: no tracks supplied");

  constexpr double kEpsMs = 1e-3;
  std::int64_t k_min = std::numeric_limits<std::int64_t>::max();
  std::int64_t k_max = std::numeric_limits<std::int64_t>::min();
  std::array<std::int64_t, 3> first_k{0, 0, 0};
  for (int c = 0; c < 3; ++c) {
    if (!by_cam[c]) continue;
    const auto& t = *by_cam[c];
    const double t0 = t.front().timestamp_ms;
    const auto k0 = static_cast<std::int64_t>(std::llround(t0 / kFrameMs));
    if (std::abs(static_cast<double>(k0) * kFrameMs - t0) > kEpsMs)
      throw Error("fuse_poses: track is not on the 30 Hz grid");
    first_k[c] = k0;
    k_min = std::min(k_min, k0);
    k_max = std::max(k_max, k0 + static_cast<std::int64_t>(t.size()) - 1);
  }

  FusedPoseSeries out;
  out.start_frame = k_min;
  out.frames.resize(static_cast<std::size_t>(k_max - k_min + 1));

  struct Obs {
    Vec3 p;
    double w;
  };
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    PoseFrame& dst = out.frames[static_cast<std::size_t>(k - k_min)];
    for (int i = 0; i < kLandmarkCount; ++i) {
      Obs obs[3];
      int n = 0;
      for (int c = 0; c < 3; ++c) {  // fixed accumulation order: front, left, right
        if (!by_cam[c]) continue;
        const auto& t = *by_cam[c];
        const std::int64_t idx = k - first_k[c];
        if (idx < 0 || idx >= static_cast<std::int64_t>(t.size())) continue;
        const LandmarkPoint& p = t[static_cast<std::size_t>(idx)].landmarks[i];
        if (p.visibility < opt.v_min) continue;
        obs[n++] = {p.pos(), p.visibility};
      }
      if (n == 0) continue;
      Vec3 centroid{};
      double wsum = 0.0;
      for (int j = 0; j < n; ++j) {
        centroid += obs[j].p * obs[j].w;
        wsum += obs[j].w;
      }
      centroid = centroid / wsum;
      Vec3 acc{};
      double wacc = 0.0;
      for (int j = 0; j < n; ++j) {
        if ((obs[j].p - centroid).norm() > opt.d_max) continue;
        acc += obs[j].p * obs[j].w;
        wacc += obs[j].w;
      }
      if (wacc <= 0.0) continue;
      dst.pts[i] = acc / wacc;
      dst.valid[i] = 1;
    }
  }
  return out;
}

}  // namespace ssig

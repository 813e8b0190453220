#pragma once

// End-to-end per-session processing: resample each camera track, rotate into
// the common frame, fuse, derive the 23 channels, trim to the main phase,
// then repair and smooth.

#include <map>
#include <optional>
#include <vector>

#include "ssig/pose_ingest.hpp"
#include "ssig/preprocess.hpp"
#include "ssig/signal_metrics.hpp"

namespace ssig {

struct PipelineOptions {
  FuseOptions fuse;
  int smooth_window = 5;
};

inline ChannelSet process_session(const SessionTracks& session,
                                  const std::map<CameraId, CameraCalibration>& calibration,
                                  const std::vector<FaceFrame>& faces,
                                  const PhaseMarkers* markers, const PipelineOptions& opt = {}) {
  std::vector<std::vector<CameraFrame>> tracks;
  std::vector<CameraFrame> front_track;
  for (int c = 0; c < 3; ++c) {
    const auto& raw = session.tracks[static_cast<std::size_t>(c)];
    if (raw.size() < 2) continue;  // a camera with under two frames cannot be resampled
    const auto cal_it = calibration.find(static_cast<CameraId>(c));
    if (cal_it == calibration.end())
      throw Error("session " + session.session_id + ": no calibration for camera " +
                  to_string(static_cast<CameraId>(c)));
    auto resampled = resample_to_30fps(raw);
    if (static_cast<CameraId>(c) == CameraId::front) front_track = resampled;
    tracks.push_back(rotate_camera_frame(std::move(resampled), cal_it->second));
  }
  if (tracks.empty())
    throw Error("session " + session.session_id + ": no camera track with at least 2 frames");
  const FusedPoseSeries fused = fuse_poses(tracks, opt.fuse);

  // iris diameters from the resampled front track, aligned to the fused grid
  std::vector<std::optional<double>> iris(fused.size());
  double focal_px = 0.0;
  const auto front_cal = calibration.find(CameraId::front);
  if (front_cal != calibration.end()) focal_px = front_cal->second.focal_px;
  if (!front_track.empty()) {
    const auto front_start =
        static_cast<std::int64_t>(std::llround(front_track.front().timestamp_ms / kFrameMs));
    for (std::size_t i = 0; i < front_track.size(); ++i) {
      const std::int64_t k = front_start + static_cast<std::int64_t>(i) - fused.start_frame;
      if (k >= 0 && k < static_cast<std::int64_t>(fused.size()))
        iris[static_cast<std::size_t>(k)] = front_track[i].iris_diameter_px;
    }
  }

  ChannelSet cs = assemble_channels(session.session_id, fused, faces, iris, focal_px);
  if (markers) cs = trim_main_phase(cs, *markers);
  for (SignalChannel& ch : cs.channels) ch = smooth(interpolate_missing(std::move(ch)), opt.smooth_window);
  return cs;
}

}  // namespace ssig

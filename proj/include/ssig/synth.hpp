#pragma once

// Seeded synthetic interaction corpora with controllable class separability.
// Low-satisfaction sessions differ from the rest, scaled by the separability
// delta, through a larger and more variable head-heading oscillation, an
// increasing distance trend, and an elevated fear-expression baseline. Every
// session draws the same parameter set from its own generator regardless of
// class, and class effects enter only multiplied by delta, so delta = 0 makes
// the class-conditional distributions identical.
//
// All emitted streams use exactly the formats the ingestion side parses.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/io.hpp"
#include "ssig/pose_ingest.hpp"

namespace ssig {

struct SynthConfig {
  int sessions = 46;
  double low_fraction = 15.0 / 46.0;
  double duration_mean_s = 132.0;
  double duration_sd_s = 61.0;
  double duration_min_s = 35.0;
  double duration_max_s = 335.0;
  double separability = 1.0;  // delta in [0, 1]
  std::uint64_t seed = 1;

  void validate() const {
    if (sessions < 2) throw Error("synth: need at least 2 sessions");
    if (duration_min_s > duration_max_s) throw Error("synth: duration_min > duration_max");
    if (duration_min_s <= 1.0) throw Error("synth: durations must exceed 1 s");
    if (separability < 0.0 || separability > 1.0) throw Error("synth: delta must be in [0,1]");
    if (low_fraction <= 0.0 || low_fraction >= 1.0) throw Error("synth: low_fraction in (0,1)");
  }
};

struct SynthPlan {
  std::vector<std::uint8_t> is_low;
  std::vector<double> duration_s;
};

struct SessionArtifacts {
  std::string landmark_lines;
  std::string face_lines;
  std::string questionnaire_line;
  std::string marker_line;
};

struct SynthCorpus {
  std::string landmarks_csv;
  std::string faces_csv;
  std::string questionnaire_csv;
  std::string markers_csv;
  std::string calibration_json;
};

inline std::string synth_session_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%03d", index + 1);
  return buf;
}

inline constexpr double kSynthFocalPx = 600.0;

inline std::map<CameraId, CameraCalibration> synth_calibration() {
  const auto rot_y = [](double deg) {
    const double c = std::cos(to_radians(deg));
    const double s = std::sin(to_radians(deg));
    return std::array<std::array<double, 3>, 3>{{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
  };
  std::map<CameraId, CameraCalibration> cals;
  cals[CameraId::front] = CameraCalibration{CameraId::front, rot_y(0.0), kSynthFocalPx};
  cals[CameraId::left] = CameraCalibration{CameraId::left, rot_y(20.0), 0.0};
  cals[CameraId::right] = CameraCalibration{CameraId::right, rot_y(-20.0), 0.0};
  return cals;
}

inline SynthPlan make_synth_plan(const SynthConfig& cfg) {
  cfg.validate();
  SynthPlan plan;
  const int n = cfg.sessions;
  const int n_low = static_cast<int>(std::llround(cfg.low_fraction * n));
  Rng rng(derive_seed(cfg.seed, 0xC0A5));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < n - 1; ++i) {
    const auto j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  plan.is_low.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n_low; ++i) plan.is_low[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
  plan.duration_s.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double d = 0.0;
    do {
      d = cfg.duration_mean_s + cfg.duration_sd_s * normal01(rng);
    } while (d < cfg.duration_min_s || d > cfg.duration_max_s);
    plan.duration_s[static_cast<std::size_t>(i)] = d;
  }
  return plan;
}

namespace synth_detail {

// Base 33-point skeleton in the common body frame (x left, y down, z forward).
inline const std::array<Vec3, kLandmarkCount>& base_skeleton() {
  static const std::array<Vec3, kLandmarkCount> base = {{
      {0.500, 0.300, 0.680},  // nose
      {0.510, 0.285, 0.665},  {0.520, 0.285, 0.660},  {0.530, 0.285, 0.655},
      {0.490, 0.285, 0.665},  {0.480, 0.285, 0.660},  {0.470, 0.285, 0.655},
      {0.545, 0.300, 0.610},  // left ear
      {0.455, 0.300, 0.610},  // right ear
      {0.520, 0.330, 0.655},  {0.480, 0.330, 0.655},
      {0.580, 0.420, 0.600},  // left shoulder
      {0.420, 0.420, 0.600},  // right shoulder
      {0.600, 0.550, 0.600},  {0.400, 0.550, 0.600},
      {0.610, 0.660, 0.620},  {0.390, 0.660, 0.620},
      {0.615, 0.690, 0.625},  {0.385, 0.690, 0.625},
      {0.612, 0.690, 0.630},  {0.388, 0.690, 0.630},
      {0.605, 0.685, 0.635},  {0.395, 0.685, 0.635},
      {0.550, 0.700, 0.600},  // left hip
      {0.450, 0.700, 0.600},  // right hip
      {0.550, 0.850, 0.600},  {0.450, 0.850, 0.600},
      {0.550, 0.970, 0.600},  {0.450, 0.970, 0.600},
      {0.555, 0.990, 0.590},  {0.445, 0.990, 0.590},
      {0.560, 0.990, 0.640},  {0.440, 0.990, 0.640},
  }};
  return base;
}

struct SessionParams {
  double heading_amp_deg = 0.0;
  double heading_freq_hz = 0.0;
  double heading_phase = 0.0;
  double drift_amp_deg = 0.0;
  double drift_freq_hz = 0.0;
  double drift_phase = 0.0;
  double sway_amp = 0.0;
  double sway_freq_hz = 0.0;
  double sway_phase = 0.0;
  double bob_amp = 0.0;
  double breathe_amp = 0.0;
  double breathe_freq_hz = 0.0;
  double lean_amp = 0.0;
  double lean_freq_hz = 0.0;
  double distance0_mm = 0.0;
  double distance_slope = 0.0;  // fractional growth over the session
  double fear_base = 0.0;
  double happy_base = 0.0;
  double neutral_base = 0.0;
  double entry_s = 0.0;
  double exit_s = 0.0;
};

// Every session draws the full parameter set; class effects are added on top
// scaled by delta so the draw sequence is class-independent.
inline SessionParams draw_params(Rng& rng, bool low, double delta) {
  SessionParams p;
  p.heading_amp_deg = uniform_in(rng, 4.0, 8.0);
  const double heading_amp_low_extra = uniform_in(rng, 24.0, 34.0);
  p.heading_freq_hz = uniform_in(rng, 0.15, 0.45);
  p.heading_phase = uniform_in(rng, 0.0, 2.0 * kPi);
  p.drift_amp_deg = uniform_in(rng, 1.0, 3.0);
  p.drift_freq_hz = uniform_in(rng, 0.02, 0.06);
  p.drift_phase = uniform_in(rng, 0.0, 2.0 * kPi);
  p.sway_amp = uniform_in(rng, 0.004, 0.012);
  p.sway_freq_hz = uniform_in(rng, 0.10, 0.30);
  p.sway_phase = uniform_in(rng, 0.0, 2.0 * kPi);
  p.bob_amp = uniform_in(rng, 0.002, 0.005);
  p.breathe_amp = uniform_in(rng, 0.003, 0.006);
  p.breathe_freq_hz = uniform_in(rng, 0.20, 0.30);
  p.lean_amp = uniform_in(rng, 0.005, 0.015);
  p.lean_freq_hz = uniform_in(rng, 0.05, 0.12);
  p.distance0_mm = uniform_in(rng, 550.0, 750.0);
  const double slope_common = uniform_in(rng, -0.05, 0.05);
  const double slope_low_extra = uniform_in(rng, 0.35, 0.60);
  p.fear_base = uniform_in(rng, 0.04, 0.10);
  const double fear_low_extra = uniform_in(rng, 0.25, 0.45);
  p.happy_base = uniform_in(rng, 0.15, 0.35);
  p.neutral_base = uniform_in(rng, 0.35, 0.55);
  p.entry_s = uniform_in(rng, 1.0, 2.5);
  p.exit_s = uniform_in(rng, 1.0, 2.5);

  const double effect = low ? delta : 0.0;
  p.heading_amp_deg += effect * heading_amp_low_extra;
  p.distance_slope = slope_common + effect * slope_low_extra;
  p.fear_base += effect * fear_low_extra;
  return p;
}

inline Vec3 rotate_y_about(const Vec3& v, const Vec3& center, double deg) {
  const double c = std::cos(to_radians(deg));
  const double s = std::sin(to_radians(deg));
  const Vec3 d = v - center;
  return {center.x + c * d.x + s * d.z, v.y, center.z - s * d.x + c * d.z};
}

// Pose in the common frame at time t (seconds), before camera noise.
inline std::array<Vec3, kLandmarkCount> pose_at(const SessionParams& p, double t,
                                                double duration_s) {
  auto pts = base_skeleton();
  const double heading = p.heading_amp_deg * std::sin(2.0 * kPi * p.heading_freq_hz * t + p.heading_phase) +
                         p.drift_amp_deg * std::sin(2.0 * kPi * p.drift_freq_hz * t + p.drift_phase);
  const Vec3 head_center = (pts[lm::left_ear] + pts[lm::right_ear]) * 0.5;
  for (int i = 0; i <= 10; ++i) pts[static_cast<std::size_t>(i)] = rotate_y_about(pts[static_cast<std::size_t>(i)], head_center, heading);

  const double lean = p.lean_amp * std::sin(2.0 * kPi * p.lean_freq_hz * t);
  for (const int i : {lm::left_shoulder, lm::right_shoulder, lm::left_elbow, lm::right_elbow})
    pts[static_cast<std::size_t>(i)].z += lean;
  for (int i = 0; i <= 10; ++i) pts[static_cast<std::size_t>(i)].z += lean * 1.4;

  Vec3 offset{p.sway_amp * std::sin(2.0 * kPi * p.sway_freq_hz * t + p.sway_phase),
              p.bob_amp * std::sin(2.0 * kPi * (p.sway_freq_hz * 1.7) * t),
              p.breathe_amp * std::sin(2.0 * kPi * p.breathe_freq_hz * t)};
  // entering / leaving the interaction area
  if (t < p.entry_s) offset.x -= 0.4 * (1.0 - t / p.entry_s);
  const double t_exit = duration_s - p.exit_s;
  if (t > t_exit) offset.x += 0.3 * ((t - t_exit) / p.exit_s);
  for (auto& v : pts) v += offset;
  return pts;
}

struct CameraNoise {
  Rng rng;
  int dropout_left = 0;
  explicit CameraNoise(std::uint64_t seed) : rng(seed) {}
};

inline void append_camera_line(std::string& out, const std::string& session, CameraId cam,
                               double t_ms, const std::array<Vec3, kLandmarkCount>& pts_common,
                               const CameraCalibration& cal, CameraNoise& noise,
                               double vis_scale, double iris_px) {
  // camera-local coordinates: v_cam = R^T * v_common
  out += session;
  out += ',';
  out += to_string(cam);
  out += ',';
  out += fmt_fixed(t_ms, 3);
  if (noise.dropout_left > 0)
    --noise.dropout_left;
  else if (uniform01(noise.rng) < 0.0015)
    noise.dropout_left = 8 + static_cast<int>(uniform_below(noise.rng, 18));
  const bool dropout = noise.dropout_left > 0;
  const auto& r = cal.rotation;
  for (const auto& p : pts_common) {
    const Vec3 v{r[0][0] * p.x + r[1][0] * p.y + r[2][0] * p.z,
                 r[0][1] * p.x + r[1][1] * p.y + r[2][1] * p.z,
                 r[0][2] * p.x + r[1][2] * p.y + r[2][2] * p.z};
    const double nx = v.x + 0.002 * normal01(noise.rng);
    const double ny = v.y + 0.002 * normal01(noise.rng);
    const double nz = v.z + 0.002 * normal01(noise.rng);
    double vis = 0.88 + 0.10 * uniform01(noise.rng);
    if (uniform01(noise.rng) < 0.01) vis = uniform_in(noise.rng, 0.10, 0.45);
    if (dropout) vis = uniform_in(noise.rng, 0.05, 0.40);
    vis = std::clamp(vis * vis_scale, 0.0, 1.0);
    out += ',';
    out += fmt_fixed(nx, 6);
    out += ',';
    out += fmt_fixed(ny, 6);
    out += ',';
    out += fmt_fixed(nz, 6);
    out += ',';
    out += fmt_fixed(vis, 4);
  }
  if (iris_px > 0.0) {
    out += ',';
    out += fmt_fixed(iris_px, 4);
  }
  out += '\n';
}

}  // namespace synth_detail

inline SessionArtifacts generate_session(const SynthConfig& cfg, const SynthPlan& plan,
                                         int index) {
  using namespace synth_detail;
  const std::string id = synth_session_id(index);
  const bool low = plan.is_low[static_cast<std::size_t>(index)] != 0;
  const double duration_s = plan.duration_s[static_cast<std::size_t>(index)];
  Rng rng(derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(index)));
  const SessionParams p = draw_params(rng, low, cfg.separability);
  const auto cals = synth_calibration();

  SessionArtifacts art;
  const double total_ms = duration_s * 1000.0;

  struct CamSpec {
    CameraId id;
    double step_ms;
    double offset_ms;
  };
  const CamSpec cams[3] = {{CameraId::front, 1000.0 / 30.0, 0.0},
                           {CameraId::left, 1000.0 / 20.0, uniform_in(rng, 0.0, 25.0)},
                           {CameraId::right, 1000.0 / 15.0, uniform_in(rng, 0.0, 25.0)}};
  const std::size_t approx_lines =
      static_cast<std::size_t>(total_ms / 1000.0 * 65.0) + 16;
  art.landmark_lines.reserve(approx_lines * 1100);
  for (const auto& cam : cams) {
    CameraNoise noise(derive_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(index) * 8 +
                                                static_cast<std::uint64_t>(cam.id)));
    const auto& cal = cals.at(cam.id);
    for (int i = 0;; ++i) {
      const double t_ms = cam.offset_ms + static_cast<double>(i) * cam.step_ms;
      if (t_ms > total_ms) break;
      const double t = t_ms / 1000.0;
      const auto pts = pose_at(p, t, duration_s);
      double vis_scale = 1.0;
      if (t < p.entry_s || t > duration_s - p.exit_s) vis_scale = 0.75;
      double iris_px = 0.0;
      if (cam.id == CameraId::front) {
        const double dist_mm = p.distance0_mm * (1.0 + p.distance_slope * t / duration_s) +
                               4.0 * normal01(noise.rng);
        iris_px = kSynthFocalPx * kIrisDiameterMm / std::max(100.0, dist_mm);
      }
      append_camera_line(art.landmark_lines, id, cam.id, t_ms, pts, cal, noise, vis_scale,
                         iris_px);
    }
  }

  {  // face stream at ~15 fps with light timing jitter
    Rng face_rng(derive_seed(cfg.seed, 3000 + static_cast<std::uint64_t>(index)));
    double spike_until = -1.0;
    double spike_amp = 0.0;
    double next_spike = uniform_in(face_rng, 4.0, 12.0);
    for (int i = 0;; ++i) {
      const double t_ms = static_cast<double>(i) * (1000.0 / 15.0) + uniform_in(face_rng, 0.0, 2.0);
      if (t_ms > total_ms) break;
      const double t = t_ms / 1000.0;
      // spikes are drawn for every session; amplitude carries the class effect
      if (t >= next_spike) {
        spike_until = t + uniform_in(face_rng, 0.5, 1.2);
        spike_amp = uniform_in(face_rng, 0.25, 0.50) * (low ? cfg.separability : 0.0);
        next_spike = t + uniform_in(face_rng, 6.0, 14.0);
      }
      double fear = p.fear_base + 0.02 * normal01(face_rng);
      if (t < spike_until) fear += spike_amp;
      double happy = p.happy_base + 0.03 * normal01(face_rng);
      double neutral = p.neutral_base + 0.03 * normal01(face_rng);
      const double anger = std::clamp(0.05 + 0.02 * normal01(face_rng), 0.0, 1.0);
      const double disgust = std::clamp(0.04 + 0.02 * normal01(face_rng), 0.0, 1.0);
      const double sadness = std::clamp(0.06 + 0.02 * normal01(face_rng), 0.0, 1.0);
      const double surprise = std::clamp(0.05 + 0.02 * normal01(face_rng), 0.0, 1.0);
      art.face_lines += id;
      art.face_lines += ',';
      art.face_lines += fmt_fixed(t_ms, 3);
      for (const double v : {happy, anger, disgust, fear, sadness, surprise, neutral}) {
        art.face_lines += ',';
        art.face_lines += fmt_fixed(std::clamp(v, 0.0, 1.0), 4);
      }
      art.face_lines += '\n';
    }
  }

  {  // questionnaire: low items within 1..3 capped at mean 2.6, high within 3..5
    Rng q_rng(derive_seed(cfg.seed, 4000 + static_cast<std::uint64_t>(index)));
    const double target = low ? uniform_in(q_rng, 1.2, 2.4) : uniform_in(q_rng, 3.2, 4.8);
    std::array<int, 5> items{};
    int sum = 0;
    for (auto& item : items) {
      const double u = target + 0.5 * normal01(q_rng);
      item = std::clamp(static_cast<int>(std::llround(u)), low ? 1 : 3, low ? 3 : 5);
      sum += item;
    }
    while (low && sum > 13) {  // keep low averages at or below 2.6
      const auto j = static_cast<std::size_t>(uniform_below(q_rng, 5));
      if (items[j] > 1) {
        --items[j];
        --sum;
      }
    }
    art.questionnaire_line = id;
    for (const int v : items) {
      art.questionnaire_line += ',';
      art.questionnaire_line += std::to_string(v);
    }
    art.questionnaire_line += '\n';
  }

  {  // main-phase markers on the fused 30 Hz grid
    const auto start = static_cast<std::int64_t>(std::ceil(p.entry_s * kFps)) + 2;
    const auto end = static_cast<std::int64_t>(std::floor((duration_s - p.exit_s) * kFps)) - 2;
    art.marker_line =
        id + "," + std::to_string(start) + "," + std::to_string(end) + "\n";
  }
  return art;
}

inline SynthCorpus generate_corpus(const SynthConfig& cfg) {
  const SynthPlan plan = make_synth_plan(cfg);
  SynthCorpus corpus;
  for (int i = 0; i < cfg.sessions; ++i) {
    const SessionArtifacts art = generate_session(cfg, plan, i);
    corpus.landmarks_csv += art.landmark_lines;
    corpus.faces_csv += art.face_lines;
    corpus.questionnaire_csv += art.questionnaire_line;
    corpus.markers_csv += art.marker_line;
  }
  std::ostringstream cal;
  write_calibration(cal, synth_calibration());
  corpus.calibration_json = cal.str();
  return corpus;
}

}  // namespace ssig

#pragma once

// Zone-based handcrafted feature engine. Channels are averaged over 0.5 s
// windows, each window mean is mapped to a numbered zone of the channel's
// value range, and features describe the zone occupancy and dynamics plus
// plain value statistics.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/features/feature_slice.hpp"
#include "ssig/signal_metrics.hpp"

namespace ssig {

struct ChannelZoneConfig {
  // Strictly increasing inner boundaries; Z = boundaries.size() + 1 zones
  // covering all of R with open outer intervals. A value exactly on a
  // boundary belongs to the higher zone.
  std::vector<double> boundaries;
  // Optional pre-binarization: values become {0,1} via v >= threshold before
  // any windowing or statistics. Off by default.
  std::optional<double> threshold;

  int zone_count() const { return static_cast<int>(boundaries.size()) + 1; }
};

struct ZoneConfig {
  double window_s = 0.5;
  int segment_count = 5;
  std::map<std::string, ChannelZoneConfig> channels;

  const ChannelZoneConfig& for_channel(const std::string& name) const {
    const auto it = channels.find(name);
    if (it == channels.end()) throw Error("zone config missing channel '" + name + "'");
    return it->second;
  }
  void validate() const {
    if (window_s <= 0.0) throw Error("zone config: window_s must be positive");
    if (segment_count < 1) throw Error("zone config: segment_count must be >= 1");
    for (const auto& [name, ch] : channels) {
      if (ch.zone_count() > 10) throw Error("zone config: more than 10 zones for '" + name + "'");
      for (std::size_t i = 0; i + 1 < ch.boundaries.size(); ++i)
        if (!(ch.boundaries[i] < ch.boundaries[i + 1]))
          throw Error("zone config: boundaries not strictly increasing for '" + name + "'");
    }
  }
};

inline int zone_of(double v, const ChannelZoneConfig& cfg) {
  int z = 1;
  for (const double b : cfg.boundaries)
    if (v >= b) ++z;
  return z;
}

namespace zones_detail {

struct Window {
  std::size_t begin;
  std::size_t end;  // exclusive
};

// Consecutive windows of `frames` samples; a final partial window is kept
// when it has at least `min_tail` samples and merged into the previous one
// otherwise. A series shorter than one window forms a single window.
inline std::vector<Window> window_partition(std::size_t n, std::size_t frames,
                                            std::size_t min_tail) {
  std::vector<Window> out;
  if (n == 0) return out;
  std::size_t pos = 0;
  while (pos + frames <= n) {
    out.push_back({pos, pos + frames});
    pos += frames;
  }
  if (pos < n) {
    if (n - pos >= min_tail || out.empty())
      out.push_back({pos, n});
    else
      out.back().end = n;
  }
  return out;
}

}  // namespace zones_detail

// Zone index (1-based) per 0.5 s window; 0 marks a window without any valid
// sample. Window means ignore missing samples.
inline std::vector<int> assign_zones(const SignalChannel& ch, const ChannelZoneConfig& cfg,
                                     double window_s = 0.5, double fps = kFps) {
  if (ch.size() == 0) throw Error("assign_zones: empty channel");
  const auto frames = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window_s * fps)));
  const auto windows = zones_detail::window_partition(ch.size(), frames, (frames + 2) / 3);
  std::vector<int> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = w.begin; i < w.end; ++i) {
      if (ch.missing[i]) continue;
      double v = ch.values[i];
      if (cfg.threshold) v = v >= *cfg.threshold ? 1.0 : 0.0;
      sum += v;
      ++cnt;
    }
    out.push_back(cnt == 0 ? 0 : zone_of(sum / static_cast<double>(cnt), cfg));
  }
  return out;
}

inline std::vector<std::string> zone_feature_names(const ChannelZoneConfig& cfg,
                                                   int segment_count = 5) {
  std::vector<std::string> names = {"value_mean", "value_min", "value_max", "value_std",
                                    "modal_zone"};
  const int z = cfg.zone_count();
  for (int i = 1; i <= z; ++i) names.push_back("zone" + std::to_string(i) + "_fraction");
  names.push_back("zone_transitions");
  names.push_back("longest_zone_run");
  names.push_back("shortest_zone_run");
  for (int s = 1; s <= segment_count; ++s)
    for (int i = 1; i <= z; ++i)
      names.push_back("win" + std::to_string(s) + "_zone" + std::to_string(i) + "_freq");
  return names;
}

// Per channel: value mean/min/max/std, modal zone, zone occupancy fractions,
// transition count, longest/shortest zone run (in windows), and per-segment
// zone frequencies over `segment_count` equal slices of the window sequence.
inline FeatureSlice extract_zone_features(const SignalChannel& ch, const ChannelZoneConfig& cfg,
                                          double window_s = 0.5, int segment_count = 5,
                                          double fps = kFps) {
  if (ch.size() == 0) throw Error("extract_zone_features: empty channel");
  const int z = cfg.zone_count();
  const auto total = static_cast<std::size_t>(8 + (1 + segment_count) * z);
  FeatureSlice out;
  if (ch.all_missing()) {
    for (std::size_t i = 0; i < total; ++i) out.push_flagged();
    return out;
  }

  std::vector<double> vals;
  vals.reserve(ch.size());
  for (std::size_t i = 0; i < ch.size(); ++i) {
    if (ch.missing[i]) continue;
    double v = ch.values[i];
    if (cfg.threshold) v = v >= *cfg.threshold ? 1.0 : 0.0;
    vals.push_back(v);
  }
  out.push_checked(mean_of(vals));
  out.push_checked(*std::min_element(vals.begin(), vals.end()));
  out.push_checked(*std::max_element(vals.begin(), vals.end()));
  out.push_checked(std::sqrt(variance_pop(vals)));

  const auto zones = assign_zones(ch, cfg, window_s, fps);
  std::vector<int> valid;  // compacted sequence of windows with data
  valid.reserve(zones.size());
  for (int v : zones)
    if (v != 0) valid.push_back(v);

  if (valid.empty()) {
    for (std::size_t i = 4; i < total; ++i) out.push_flagged();
    return out;
  }

  std::vector<int> counts(static_cast<std::size_t>(z) + 1, 0);
  for (int v : valid) ++counts[static_cast<std::size_t>(v)];
  int modal = 1;
  for (int i = 2; i <= z; ++i)
    if (counts[static_cast<std::size_t>(i)] > counts[static_cast<std::size_t>(modal)]) modal = i;
  out.push_checked(modal);
  for (int i = 1; i <= z; ++i)
    out.push_checked(static_cast<double>(counts[static_cast<std::size_t>(i)]) /
                     static_cast<double>(valid.size()));

  int transitions = 0;
  int longest = 1, shortest = static_cast<int>(valid.size()), run = 1;
  for (std::size_t i = 1; i < valid.size(); ++i) {
    if (valid[i] != valid[i - 1]) {
      ++transitions;
      shortest = std::min(shortest, run);
      run = 1;
    } else {
      ++run;
    }
    longest = std::max(longest, run);
  }
  shortest = std::min(shortest, run);
  out.push_checked(transitions);
  out.push_checked(longest);
  out.push_checked(shortest);

  // Per-segment zone frequencies over the full window sequence, counting only
  // windows with data; segments without data are flagged.
  const std::size_t w = zones.size();
  for (int s = 0; s < segment_count; ++s) {
    const std::size_t a = w * static_cast<std::size_t>(s) / static_cast<std::size_t>(segment_count);
    const std::size_t b =
        w * static_cast<std::size_t>(s + 1) / static_cast<std::size_t>(segment_count);
    std::vector<int> seg_counts(static_cast<std::size_t>(z) + 1, 0);
    std::size_t seg_valid = 0;
    for (std::size_t i = a; i < b; ++i) {
      if (zones[i] == 0) continue;
      ++seg_counts[static_cast<std::size_t>(zones[i])];
      ++seg_valid;
    }
    for (int i = 1; i <= z; ++i) {
      if (seg_valid == 0)
        out.push_flagged();
      else
        out.push_checked(static_cast<double>(seg_counts[static_cast<std::size_t>(i)]) /
                         static_cast<double>(seg_valid));
    }
  }
  return out;
}

// Default zone layout: orientation channels get the fixed facing/glancing/
// away bands at +-10 and +-30 degrees; velocity and distance channels get 10
// equal-width zones over the robust (1st..99th percentile) corpus range; face
// channels get fixed probability bands; everything else gets 5 equal-width
// zones over the robust corpus range.
inline ZoneConfig default_zone_config(std::span<const ChannelSet> corpus) {
  ZoneConfig cfg;
  const auto robust_bands = [&](int channel, int zone_cnt) {
    std::vector<double> pool;
    for (const ChannelSet& cs : corpus) {
      const SignalChannel& ch = cs.channels[static_cast<std::size_t>(channel)];
      for (std::size_t i = 0; i < ch.size(); ++i)
        if (!ch.missing[i]) pool.push_back(ch.values[i]);
    }
    std::vector<double> bounds;
    if (pool.empty()) return bounds;
    const double lo = percentile_linear(pool, 0.01);
    const double hi = percentile_linear(std::move(pool), 0.99);
    if (!(hi - lo > 1e-9)) return bounds;  // degenerate range -> single zone
    for (int i = 1; i < zone_cnt; ++i)
      bounds.push_back(lo + (hi - lo) * static_cast<double>(i) / zone_cnt);
    return bounds;
  };
  for (int i = 0; i < kChannelCount; ++i) {
    ChannelZoneConfig ch;
    const std::string name = kChannelNames[static_cast<std::size_t>(i)];
    if (i <= 5) {
      ch.boundaries = {-30.0, -10.0, 10.0, 30.0};
    } else if ((i >= 9 && i <= 11) || i == 15) {
      ch.boundaries = robust_bands(i, 10);
    } else if (i >= 16) {
      ch.boundaries = {0.2, 0.4, 0.6, 0.8};
    } else {
      ch.boundaries = robust_bands(i, 5);
    }
    cfg.channels[name] = std::move(ch);
  }
  return cfg;
}

}  // namespace ssig

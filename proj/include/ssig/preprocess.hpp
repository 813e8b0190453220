#pragma once

// Session trimming and channel repair: main-phase slicing, linear
// interpolation of missing runs, and moving-average smoothing.

#include <cstdint>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/signal_metrics.hpp"

namespace ssig {

struct PhaseMarkers {
  std::int64_t main_start_frame = 0;
  std::int64_t main_end_frame = 0;  // inclusive
};

inline ChannelSet trim_main_phase(const ChannelSet& cs, const PhaseMarkers& markers) {
  const auto len = static_cast<std::int64_t>(cs.length());
  if (markers.main_start_frame < 0 || markers.main_end_frame >= len ||
      markers.main_start_frame >= markers.main_end_frame)
    throw Error("trim_main_phase: markers [" + std::to_string(markers.main_start_frame) + ", " +
                std::to_string(markers.main_end_frame) + "] out of range for length " +
                std::to_string(len));
  ChannelSet out;
  out.session_id = cs.session_id;
  out.channels.reserve(cs.channels.size());
  const auto a = static_cast<std::size_t>(markers.main_start_frame);
  const auto b = static_cast<std::size_t>(markers.main_end_frame);
  for (const SignalChannel& ch : cs.channels) {
    SignalChannel t;
    t.name = ch.name;
    t.unit = ch.unit;
    t.values.assign(ch.values.begin() + a, ch.values.begin() + b + 1);
    t.missing.assign(ch.missing.begin() + a, ch.missing.begin() + b + 1);
    out.channels.push_back(std::move(t));
  }
  return out;
}

// Interior missing runs are filled linearly between the bounding valid
// samples; leading/trailing runs take the nearest valid value. An all-missing
// channel is returned unchanged.
inline SignalChannel interpolate_missing(SignalChannel ch) {
  const std::size_t n = ch.size();
  std::size_t first_valid = n, last_valid = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ch.missing[i]) {
      if (first_valid == n) first_valid = i;
      last_valid = i;
    }
  }
  if (first_valid == n) return ch;  // all missing, left flagged as-is
  for (std::size_t i = 0; i < first_valid; ++i) {
    ch.values[i] = ch.values[first_valid];
    ch.missing[i] = 0;
  }
  for (std::size_t i = last_valid + 1; i < n; ++i) {
    ch.values[i] = ch.values[last_valid];
    ch.missing[i] = 0;
  }
  std::size_t i = first_valid;
  while (i < last_valid) {
    if (!ch.missing[i + 1]) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (ch.missing[j]) ++j;  // j <= last_valid is valid by construction
    const double lo = ch.values[i];
    const double hi = ch.values[j];
    const auto gap = static_cast<double>(j - i);
    for (std::size_t k = i + 1; k < j; ++k) {
      ch.values[k] = lo + (hi - lo) * (static_cast<double>(k - i) / gap);
      ch.missing[k] = 0;
    }
    i = j;
  }
  return ch;
}

// Centered moving average with an odd window; edges average over the part of
// the window that exists. Missing samples stay missing and are excluded from
// the window means of their neighbours.
inline SignalChannel smooth(const SignalChannel& ch, int window = 5) {
  if (window < 1 || window % 2 == 0) throw Error("smooth: window must be odd and >= 1");
  if (window == 1) return ch;
  const std::size_t n = ch.size();
  const int h = window / 2;
  SignalChannel out = ch;
  for (std::size_t i = 0; i < n; ++i) {
    if (ch.missing[i]) continue;
    const std::size_t lo = i >= static_cast<std::size_t>(h) ? i - h : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(h));
    double sum = 0.0;
    int cnt = 0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (ch.missing[j]) continue;
      sum += ch.values[j];
      ++cnt;
    }
    out.values[i] = sum / cnt;
  }
  return out;
}

}  // namespace ssig

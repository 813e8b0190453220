#pragma once

// Spectral-statistical feature engine: 78 features per channel built from the
// first eleven FFT coefficients, moments, order statistics, energy/variation
// measures, autocorrelation, c3 nonlinearity, complexity, and a linear trend.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/features/feature_slice.hpp"
#include "ssig/fft.hpp"

namespace ssig {

inline constexpr int kSpectralStatFeatureCount = 78;

inline std::vector<std::string> spectral_stat_feature_names() {
  std::vector<std::string> names;
  names.reserve(kSpectralStatFeatureCount);
  for (int k = 0; k <= 10; ++k) {
    const std::string base = "fft_k" + std::to_string(k) + "_";
    names.push_back(base + "real");
    names.push_back(base + "imag");
    names.push_back(base + "abs");
    names.push_back(base + "angle");
  }
  for (const char* n : {"mean", "variance", "skewness", "kurtosis", "min", "max", "median", "q10",
                        "q25", "q75", "q90", "abs_energy", "rms", "mean_abs_change", "mean_change",
                        "count_above_mean", "count_below_mean", "longest_run_above_mean",
                        "longest_run_below_mean", "acf_lag1", "acf_lag2", "acf_lag3", "acf_lag4",
                        "acf_lag5", "c3_lag1", "c3_lag2", "c3_lag3", "cid", "mean_crossings",
                        "trend_slope", "trend_intercept", "trend_rvalue", "sample_count",
                        "duration_s"})
    names.push_back(n);
  return names;
}

namespace detail {

// tsfresh-style autocorrelation: covariance at lag k over (n-k) terms,
// normalized by the population variance.
inline double acf_lag(std::span<const double> x, std::size_t lag, double mean, double var_pop) {
  const std::size_t n = x.size();
  if (lag >= n || var_pop <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
  return s / (static_cast<double>(n - lag) * var_pop);
}

inline double c3_lag(std::span<const double> x, std::size_t lag) {
  const std::size_t n = x.size();
  if (2 * lag >= n) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (std::size_t i = 0; i + 2 * lag < n; ++i) s += x[i + 2 * lag] * x[i + lag] * x[i];
  return s / static_cast<double>(n - 2 * lag);
}

struct LinearTrend {
  double slope = 0.0;
  double intercept = 0.0;
  double rvalue = 0.0;
  bool degenerate = false;
};

// Least squares of x against t = 0..n-1.
inline LinearTrend linear_trend(std::span<const double> x) {
  const std::size_t n = x.size();
  LinearTrend t;
  if (n < 2) {
    t.degenerate = true;
    return t;
  }
  const double tm = static_cast<double>(n - 1) / 2.0;
  const double xm = mean_of(x);
  double stt = 0.0, stx = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) - tm;
    const double dx = x[i] - xm;
    stt += dt * dt;
    stx += dt * dx;
    sxx += dx * dx;
  }
  t.slope = stx / stt;
  t.intercept = xm - t.slope * tm;
  if (sxx <= 0.0) {
    t.rvalue = 0.0;
    t.degenerate = true;
  } else {
    t.rvalue = stx / std::sqrt(stt * sxx);
  }
  return t;
}

}  // namespace detail

// Features are computed over the valid samples of the channel, in order;
// series with fewer than 3 valid samples produce an all-flagged slice.
inline FeatureSlice extract_spectral_stat(std::span<const double> x, double fps = kFps) {
  FeatureSlice out;
  const std::size_t n = x.size();
  if (n < 3) {
    for (int i = 0; i < kSpectralStatFeatureCount; ++i) out.push_flagged();
    return out;
  }

  const auto spectrum = fft(x);
  for (int k = 0; k <= 10; ++k) {
    const auto& c = spectrum[static_cast<std::size_t>(k)];
    out.push_checked(c.real());
    out.push_checked(c.imag());
    out.push_checked(std::abs(c));
    out.push_checked(std::atan2(c.imag(), c.real()));
  }

  const double m = mean_of(x);
  const double var = variance_pop(x);
  out.push_checked(m);
  out.push_checked(var);
  double m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (var > 0.0) {
    out.push_checked(m3 / std::pow(var, 1.5));
    out.push_checked(m4 / (var * var) - 3.0);  // excess kurtosis
  } else {
    out.push_flagged();
    out.push_flagged();
  }

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  out.push_checked(sorted.front());
  out.push_checked(sorted.back());
  const auto pct = [&](double p) {
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= n) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
  };
  out.push_checked(pct(0.5));
  out.push_checked(pct(0.10));
  out.push_checked(pct(0.25));
  out.push_checked(pct(0.75));
  out.push_checked(pct(0.90));

  double energy = 0.0;
  for (double v : x) energy += v * v;
  out.push_checked(energy);
  out.push_checked(std::sqrt(energy / static_cast<double>(n)));
  double abs_change = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) abs_change += std::abs(x[i + 1] - x[i]);
  out.push_checked(abs_change / static_cast<double>(n - 1));
  out.push_checked((x[n - 1] - x[0]) / static_cast<double>(n - 1));

  int above = 0, below = 0;
  int run_above = 0, run_below = 0, best_above = 0, best_below = 0;
  for (double v : x) {
    if (v > m) {
      ++above;
      best_above = std::max(best_above, ++run_above);
      run_below = 0;
    } else if (v < m) {
      ++below;
      best_below = std::max(best_below, ++run_below);
      run_above = 0;
    } else {
      run_above = run_below = 0;
    }
  }
  out.push_checked(above);
  out.push_checked(below);
  out.push_checked(best_above);
  out.push_checked(best_below);

  for (std::size_t lag = 1; lag <= 5; ++lag) out.push_checked(detail::acf_lag(x, lag, m, var));
  for (std::size_t lag = 1; lag <= 3; ++lag) out.push_checked(detail::c3_lag(x, lag));

  double cid = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) cid += (x[i + 1] - x[i]) * (x[i + 1] - x[i]);
  out.push_checked(std::sqrt(cid));

  int crossings = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if ((x[i] > m) != (x[i + 1] > m)) ++crossings;
  out.push_checked(crossings);

  const auto trend = detail::linear_trend(x);
  out.push_checked(trend.slope);
  out.push_checked(trend.intercept);
  if (trend.degenerate)
    out.push_flagged();
  else
    out.push_checked(trend.rvalue);

  out.push_checked(static_cast<double>(n));
  out.push_checked(static_cast<double>(n) / fps);
  return out;
}

}  // namespace ssig

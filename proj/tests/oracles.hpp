#pragma once

// Independent brute-force reference implementations used only by tests.
// Nothing here shares numerical code with the library paths it checks;
// O(N^2) is fine.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Direct O(N^2) DFT: X_k = sum_n x_n exp(-2 pi i k n / N).
inline std::vector<std::complex<double>> naive_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(t) /
                         static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

// ANOVA F from explicit sums of squares, written independently.
inline double anova_f_direct(std::span<const double> x, std::span<const int> y) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] == 0) {
      s0 += x[i];
      ++n0;
    } else {
      s1 += x[i];
      ++n1;
    }
  }
  const double m0 = s0 / static_cast<double>(n0);
  const double m1 = s1 / static_cast<double>(n1);
  const double grand = (s0 + s1) / static_cast<double>(n0 + n1);
  double ssb = static_cast<double>(n0) * (m0 - grand) * (m0 - grand) +
               static_cast<double>(n1) * (m1 - grand) * (m1 - grand);
  double ssw = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = y[i] == 0 ? m0 : m1;
    ssw += (x[i] - m) * (x[i] - m);
  }
  if (ssw <= 0.0) return ssb > 0.0 ? std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::quiet_NaN();
  const double dfw = static_cast<double>(n0 + n1) - 2.0;
  return ssb / (ssw / dfw);
}

// Exhaustive run/transition statistics over a zone sequence.
struct ZoneRunStats {
  int transitions = 0;
  int longest_run = 0;
  int shortest_run = 0;
};

inline ZoneRunStats zone_runs_exhaustive(std::span<const int> zones) {
  ZoneRunStats s;
  if (zones.empty()) return s;
  std::vector<int> runs;
  int len = 1;
  for (std::size_t i = 1; i < zones.size(); ++i) {
    if (zones[i] == zones[i - 1]) {
      ++len;
    } else {
      runs.push_back(len);
      len = 1;
      ++s.transitions;
    }
  }
  runs.push_back(len);
  s.longest_run = *std::max_element(runs.begin(), runs.end());
  s.shortest_run = *std::min_element(runs.begin(), runs.end());
  return s;
}

// Pairwise AUC from the definition: every positive/negative pair compared,
// ties worth half.
inline double pairwise_auc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// Per-gap two-point line equation fill; edges copy the nearest valid value.
inline std::vector<double> interpolate_gaps(std::span<const double> values,
                                            std::span<const std::uint8_t> missing) {
  const std::size_t n = values.size();
  std::vector<double> out(values.begin(), values.end());
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < n; ++i)
    if (!missing[i]) valid.push_back(i);
  if (valid.empty()) return out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!missing[i]) continue;
    if (i < valid.front()) {
      out[i] = values[valid.front()];
      continue;
    }
    if (i > valid.back()) {
      out[i] = values[valid.back()];
      continue;
    }
    std::size_t lo = valid.front(), hi = valid.back();
    for (const std::size_t v : valid) {
      if (v < i) lo = v;
      if (v > i) {
        hi = v;
        break;
      }
    }
    const double slope = (values[hi] - values[lo]) / static_cast<double>(hi - lo);
    out[i] = values[lo] + slope * static_cast<double>(i - lo);
  }
  return out;
}

// Central finite differences of a scalar function.
template <typename F>
inline std::vector<double> finite_difference_gradient(F&& f, std::vector<double> point,
                                                      double h = 1e-6) {
  std::vector<double> grad(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double orig = point[i];
    point[i] = orig + h;
    const double fp = f(point);
    point[i] = orig - h;
    const double fm = f(point);
    point[i] = orig;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Percentile with linear interpolation between order statistics, written
// against the definition rather than the library helper.
inline double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] * (1.0 - (h - static_cast<double>(lo))) + v[lo + 1] * (h - static_cast<double>(lo));
}

// Brute-force autocorrelation (normalized to acf[0] = 1).
inline std::vector<double> autocorrelation_direct(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (const double v : x) mean += v;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (const double v : x) denom += (v - mean) * (v - mean);
  std::vector<double> acf(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag && k < n; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += (x[t] - mean) * (x[t + k] - mean);
    acf[k] = s / denom;
  }
  return acf;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  sx /= static_cast<double>(n);
  sy /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (std::log(x[i]) - sx) * (std::log(y[i]) - sy);
    den += (std::log(x[i]) - sx) * (std::log(x[i]) - sx);
  }
  return num / den;
}

// Spearman rank correlation (no tie handling beyond average ranks).
inline double spearman(std::span<const double> a, std::span<const double> b) {
  const auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < v.size()) {
      std::size_t j = i;
      while (j + 1 < v.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i + j)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= static_cast<double>(ra.size());
  mb /= static_cast<double>(rb.size());
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace oracle

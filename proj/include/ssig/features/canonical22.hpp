#pragma once

// The canonical 22-feature time-series catalog, reimplemented from scratch:
// distribution modes, autocorrelation timescales, automutual information,
// successive-difference statistics, symbolic motifs, outlier timing,
// spectral summaries, fluctuation scaling, and local forecasting errors.
//
// All features operate on the z-scored series, matching the catalog's
// convention. Constant or very short inputs yield an all-flagged slice with
// fallback value 0 instead of undefined numbers.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ssig/common.hpp"
#include "ssig/features/feature_slice.hpp"
#include "ssig/fft.hpp"

namespace ssig {

inline constexpr int kCanonical22FeatureCount = 22;

inline std::vector<std::string> canonical22_feature_names() {
  return {"hist_mode_5",
          "hist_mode_10",
          "acf_first_e_crossing",
          "acf_first_min",
          "ami_even_lag2_5bin",
          "time_reversibility",
          "pnn_0p04",
          "stretch_above_mean",
          "transition3_trace_cov",
          "periodicity_wang",
          "embed2_dist_expfit_meandiff",
          "ami_gauss_first_min",
          "forecast_mean1_tau_ratio",
          "outlier_timing_pos",
          "outlier_timing_neg",
          "spectral_area_low5th",
          "stretch_decreasing",
          "motif3_pair_entropy",
          "rs_range_prop_r1",
          "dfa_prop_r1",
          "spectral_centroid",
          "forecast_mean3_stderr"};
}

namespace c22 {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::vector<double> zscore(std::span<const double> x) {
  const double m = mean_of(x);
  const double sd = std::sqrt(variance_pop(x));
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m) / sd;
  return z;
}

// Center of the most populated of `bins` equal-width bins; ties average.
inline double histogram_mode(std::span<const double> z, int bins) {
  const auto [mn_it, mx_it] = std::minmax_element(z.begin(), z.end());
  const double mn = *mn_it, mx = *mx_it;
  if (!(mx > mn)) return kNaN;
  const double width = (mx - mn) / bins;
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : z) {
    auto b = static_cast<int>((v - mn) / width);
    b = std::clamp(b, 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  int best = -1;
  double center_sum = 0.0;
  int ties = 0;
  for (int b = 0; b < bins; ++b) {
    const double center = mn + width * (b + 0.5);
    if (counts[static_cast<std::size_t>(b)] > best) {
      best = counts[static_cast<std::size_t>(b)];
      center_sum = center;
      ties = 1;
    } else if (counts[static_cast<std::size_t>(b)] == best) {
      center_sum += center;
      ++ties;
    }
  }
  return center_sum / ties;
}

// First lag with acf <= 0; the last computed lag when it never crosses zero.
inline std::size_t first_zero_crossing(std::span<const double> acf) {
  if (acf.size() < 2) return 1;
  for (std::size_t k = 1; k < acf.size(); ++k)
    if (acf[k] <= 0.0) return k;
  return acf.size() - 1;
}

inline double first_e_crossing(std::span<const double> acf) {
  const double thresh = 1.0 / std::exp(1.0);
  for (std::size_t i = 0; i + 1 < acf.size(); ++i) {
    if (acf[i + 1] < thresh) {
      const double denom = acf[i] - acf[i + 1];
      if (denom <= 0.0) return static_cast<double>(i + 1);
      return static_cast<double>(i) + (acf[i] - thresh) / denom;
    }
  }
  return static_cast<double>(acf.size());
}

inline double first_local_min(std::span<const double> v) {
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] < v[i - 1] && v[i] < v[i + 1]) return static_cast<double>(i);
  return static_cast<double>(v.empty() ? 0 : v.size() - 1);
}

// Joint-histogram automutual information with even-width bins at `lag`.
inline double histogram_ami(std::span<const double> z, std::size_t lag, int bins) {
  const std::size_t n = z.size();
  if (n <= lag + 1) return kNaN;
  const auto [mn_it, mx_it] = std::minmax_element(z.begin(), z.end());
  const double mn = *mn_it, mx = *mx_it;
  if (!(mx > mn)) return kNaN;
  const double width = (mx - mn) / bins;
  const auto bin_of = [&](double v) {
    return std::clamp(static_cast<int>((v - mn) / width), 0, bins - 1);
  };
  const std::size_t m = n - lag;
  std::vector<double> joint(static_cast<std::size_t>(bins * bins), 0.0);
  std::vector<double> px(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> py(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const int i = bin_of(z[t]);
    const int j = bin_of(z[t + lag]);
    joint[static_cast<std::size_t>(i * bins + j)] += 1.0;
  }
  for (auto& v : joint) v /= static_cast<double>(m);
  for (int i = 0; i < bins; ++i)
    for (int j = 0; j < bins; ++j) {
      px[static_cast<std::size_t>(i)] += joint[static_cast<std::size_t>(i * bins + j)];
      py[static_cast<std::size_t>(j)] += joint[static_cast<std::size_t>(i * bins + j)];
    }
  double mi = 0.0;
  for (int i = 0; i < bins; ++i)
    for (int j = 0; j < bins; ++j) {
      const double p = joint[static_cast<std::size_t>(i * bins + j)];
      if (p > 0.0) mi += p * std::log(p / (px[static_cast<std::size_t>(i)] * py[static_cast<std::size_t>(j)]));
    }
  return mi;
}

inline int longest_run(const std::vector<std::uint8_t>& b, std::uint8_t target) {
  int best = 0, run = 0;
  for (auto v : b) {
    if (v == target)
      best = std::max(best, ++run);
    else
      run = 0;
  }
  return best;
}

// Equiprobable three-letter alphabet via terciles.
inline std::vector<int> tercile_symbols(std::span<const double> v) {
  std::vector<double> data(v.begin(), v.end());
  const double q1 = percentile_linear(data, 1.0 / 3.0);
  const double q2 = percentile_linear(data, 2.0 / 3.0);
  std::vector<int> s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i] <= q1 ? 0 : (v[i] <= q2 ? 1 : 2);
  return s;
}

// Entropy of consecutive symbol pairs under the tercile alphabet.
inline double motif3_pair_entropy(std::span<const double> z) {
  if (z.size() < 2) return kNaN;
  const auto sym = tercile_symbols(z);
  std::array<double, 9> joint{};
  const std::size_t m = sym.size() - 1;
  for (std::size_t t = 0; t < m; ++t) joint[static_cast<std::size_t>(sym[t] * 3 + sym[t + 1])] += 1.0;
  double h = 0.0;
  for (double c : joint) {
    if (c <= 0.0) continue;
    const double p = c / static_cast<double>(m);
    h -= p * std::log(p);
  }
  return h;
}

// Trace of the covariance of the tercile transition matrix, computed on the
// series downsampled at the first acf zero crossing.
inline double transition3_trace_cov(std::span<const double> z, std::size_t tau) {
  if (tau < 1) tau = 1;
  std::vector<double> ds;
  for (std::size_t i = 0; i < z.size(); i += tau) ds.push_back(z[i]);
  if (ds.size() < 4) return kNaN;
  const auto sym = tercile_symbols(ds);
  double t[3][3] = {};
  const std::size_t m = sym.size() - 1;
  for (std::size_t i = 0; i < m; ++i) t[sym[i]][sym[i + 1]] += 1.0;
  for (auto& row : t)
    for (double& v : row) v /= static_cast<double>(m);
  // sample covariance across rows, columns as variables
  double trace = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double mu = (t[0][j] + t[1][j] + t[2][j]) / 3.0;
    double ss = 0.0;
    for (int i = 0; i < 3; ++i) ss += (t[i][j] - mu) * (t[i][j] - mu);
    trace += ss / 2.0;
  }
  return trace;
}

// Wang's periodicity: linear detrend, then the first acf peak that rises at
// least `th` above the preceding trough and is positive. 0 when aperiodic.
inline double periodicity_wang(std::span<const double> z, double th = 0.01) {
  const std::size_t n = z.size();
  std::vector<double> y(z.begin(), z.end());
  {
    const double tm = static_cast<double>(n - 1) / 2.0;
    const double ym = mean_of(y);
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dt = static_cast<double>(i) - tm;
      stt += dt * dt;
      sty += dt * (y[i] - ym);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      y[i] -= ym + slope * (static_cast<double>(i) - tm);
  }
  const std::size_t max_lag = n / 3;
  const auto acf = autocorrelation_fft(y, max_lag);
  if (acf.size() < 4) return 0.0;
  double trough_val = acf[0];
  bool have_trough = false;
  for (std::size_t i = 1; i + 1 < acf.size(); ++i) {
    if (acf[i] < acf[i - 1] && acf[i] < acf[i + 1]) {
      trough_val = acf[i];
      have_trough = true;
    } else if (have_trough && acf[i] > acf[i - 1] && acf[i] > acf[i + 1]) {
      if (acf[i] > 0.0 && acf[i] - trough_val >= th) return static_cast<double>(i);
    }
  }
  return 0.0;
}

// Mean absolute difference between the distance distribution of successive
// 2-d embedding points (lag tau) and an exponential fit to it.
inline double embed2_dist_expfit_meandiff(std::span<const double> z, std::size_t tau) {
  const std::size_t n = z.size();
  if (tau < 1 || tau > n || n - tau < 3) return kNaN;
  const std::size_t m = n - tau - 1;
  std::vector<double> d(m);
  for (std::size_t t = 0; t < m; ++t) {
    const double dx = z[t + 1] - z[t];
    const double dy = z[t + 1 + tau] - z[t + tau];
    d[t] = std::sqrt(dx * dx + dy * dy);
  }
  const double mu = mean_of(d);
  if (!(mu > 0.0)) return kNaN;
  const auto [mn_it, mx_it] = std::minmax_element(d.begin(), d.end());
  const double mn = *mn_it, mx = *mx_it;
  if (!(mx > mn)) return kNaN;
  const auto bins = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
  const double width = (mx - mn) / bins;
  std::vector<double> density(static_cast<std::size_t>(bins), 0.0);
  for (double v : d) {
    auto b = std::clamp(static_cast<int>((v - mn) / width), 0, bins - 1);
    density[static_cast<std::size_t>(b)] += 1.0;
  }
  for (auto& v : density) v /= static_cast<double>(m) * width;
  double diff = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double center = mn + width * (b + 0.5);
    diff += std::abs(density[static_cast<std::size_t>(b)] - std::exp(-center / mu) / mu);
  }
  return diff / bins;
}

// Relative median position (in [-1, 1]) of samples beyond rising thresholds,
// median over thresholds that still include enough samples.
inline double outlier_timing(std::span<const double> z, bool positive) {
  const std::size_t n = z.size();
  constexpr double kInc = 0.01;
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : z) mx = std::max(mx, positive ? v : -v);
  if (!(mx > 0.0)) return kNaN;
  const auto min_count =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(0.02 * static_cast<double>(n))));
  std::vector<double> rel;
  const double half = static_cast<double>(n - 1) / 2.0;
  for (double th = 0.0; th <= mx; th += kInc) {
    std::vector<double> idx;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = positive ? z[i] : -z[i];
      if (v >= th) idx.push_back(static_cast<double>(i));
    }
    if (idx.size() < min_count) break;  // thresholds only lose samples as they rise
    rel.push_back(percentile_linear(std::move(idx), 0.5) / half - 1.0);
  }
  if (rel.empty()) return kNaN;
  return percentile_linear(std::move(rel), 0.5);
}

struct Spectrum {
  std::vector<double> power;  // one-sided
  double domega = 0.0;
};

// Rectangular-window periodogram over the padded series, one-sided in
// angular frequency.
inline Spectrum periodogram(std::span<const double> z) {
  const auto sp = fft(z);
  const std::size_t p = sp.size();
  Spectrum s;
  s.domega = 2.0 * kPi / static_cast<double>(p);
  s.power.resize(p / 2 + 1);
  for (std::size_t j = 0; j < s.power.size(); ++j)
    s.power[j] = std::norm(sp[j]) / (2.0 * kPi * static_cast<double>(z.size()));
  return s;
}

inline double spectral_area_low5th(const Spectrum& s) {
  const std::size_t upto = (s.power.size() + 4) / 5;
  double area = 0.0;
  for (std::size_t j = 0; j < upto; ++j) area += s.power[j] * s.domega;
  return area;
}

// Angular frequency where the cumulative power first exceeds half the total.
inline double spectral_centroid(const Spectrum& s) {
  double total = 0.0;
  for (double v : s.power) total += v;
  if (!(total > 0.0)) return kNaN;
  double cum = 0.0;
  for (std::size_t j = 0; j < s.power.size(); ++j) {
    cum += s.power[j];
    if (cum > total / 2.0) return static_cast<double>(j) * s.domega;
  }
  return static_cast<double>(s.power.size() - 1) * s.domega;
}

enum class FluctType { dfa, rs_range };

struct FluctCurve {
  std::vector<double> tau;
  std::vector<double> fluctuation;
};

// Detrended fluctuation curve over ~50 logarithmically spaced window sizes.
// For dfa the statistic is the rms linear-detrend residual of the cumulative
// profile; for rs_range it is the rms range of those residuals. `lag`
// decimates the series before the profile is built.
inline FluctCurve fluctuation_curve(std::span<const double> z, FluctType type, std::size_t lag) {
  FluctCurve out;
  std::vector<double> y;
  for (std::size_t i = 0; i < z.size(); i += lag) y.push_back(z[i]);
  const std::size_t n = y.size();
  if (n < 12) return out;
  const double m = mean_of(y);
  std::vector<double> profile(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += y[i] - m;
    profile[i] = acc;
  }
  const std::size_t tau_max = n / 2;
  std::vector<std::size_t> taus;
  const double l0 = std::log(5.0), l1 = std::log(static_cast<double>(tau_max));
  for (int k = 0; k < 50; ++k) {
    const double lt = l0 + (l1 - l0) * static_cast<double>(k) / 49.0;
    const auto t = static_cast<std::size_t>(std::llround(std::exp(lt)));
    if (t >= 5 && t <= tau_max && (taus.empty() || t != taus.back())) taus.push_back(t);
  }
  for (const std::size_t tau : taus) {
    const std::size_t nwin = n / tau;
    double accval = 0.0;
    for (std::size_t w = 0; w < nwin; ++w) {
      const double* seg = profile.data() + w * tau;
      // linear fit over local coordinates 0..tau-1
      const double tm = static_cast<double>(tau - 1) / 2.0;
      double sm = 0.0;
      for (std::size_t j = 0; j < tau; ++j) sm += seg[j];
      sm /= static_cast<double>(tau);
      double stt = 0.0, sts = 0.0;
      for (std::size_t j = 0; j < tau; ++j) {
        const double dt = static_cast<double>(j) - tm;
        stt += dt * dt;
        sts += dt * (seg[j] - sm);
      }
      const double slope = stt > 0.0 ? sts / stt : 0.0;
      if (type == FluctType::dfa) {
        double ss = 0.0;
        for (std::size_t j = 0; j < tau; ++j) {
          const double r = seg[j] - (sm + slope * (static_cast<double>(j) - tm));
          ss += r * r;
        }
        accval += ss / static_cast<double>(tau);
      } else {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < tau; ++j) {
          const double r = seg[j] - (sm + slope * (static_cast<double>(j) - tm));
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        accval += (hi - lo) * (hi - lo);
      }
    }
    out.tau.push_back(static_cast<double>(tau));
    out.fluctuation.push_back(std::sqrt(accval / static_cast<double>(nwin)));
  }
  return out;
}

// Proportion of log-spaced scales assigned to the first of two linear
// segments fitted to the log-log fluctuation curve.
inline double fluct_prop_r1(const FluctCurve& c) {
  const std::size_t ntt = c.tau.size();
  if (ntt < 6) return kNaN;
  std::vector<double> lt(ntt), lf(ntt);
  for (std::size_t i = 0; i < ntt; ++i) {
    if (!(c.fluctuation[i] > 0.0)) return kNaN;
    lt[i] = std::log(c.tau[i]);
    lf[i] = std::log(c.fluctuation[i]);
  }
  const auto sse = [&](std::size_t a, std::size_t b) {  // fit over [a, b)
    const auto m = static_cast<double>(b - a);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = a; i < b; ++i) {
      sx += lt[i];
      sy += lf[i];
    }
    sx /= m;
    sy /= m;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = a; i < b; ++i) {
      stt += (lt[i] - sx) * (lt[i] - sx);
      sty += (lt[i] - sx) * (lf[i] - sy);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    double ss = 0.0;
    for (std::size_t i = a; i < b; ++i) {
      const double r = lf[i] - (sy + slope * (lt[i] - sx));
      ss += r * r;
    }
    return ss;
  };
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_s = 3;
  for (std::size_t s = 3; s + 2 <= ntt; ++s) {  // segments [0,s) and [s-1,ntt)
    const double total = sse(0, s) + sse(s - 1, ntt);
    if (total < best) {
      best = total;
      best_s = s;
    }
  }
  return static_cast<double>(best_s) / static_cast<double>(ntt);
}

// Residual statistics of forecasting each point by the mean of the previous
// `window` points.
inline std::vector<double> local_mean_residuals(std::span<const double> z, std::size_t window) {
  const std::size_t n = z.size();
  if (n <= window) return {};
  std::vector<double> res(n - window);
  for (std::size_t t = window; t < n; ++t) {
    double m = 0.0;
    for (std::size_t j = t - window; j < t; ++j) m += z[j];
    res[t - window] = z[t] - m / static_cast<double>(window);
  }
  return res;
}

}  // namespace c22

inline FeatureSlice extract_canonical22(std::span<const double> x) {
  FeatureSlice out;
  const std::size_t n = x.size();
  const double var = n >= 2 ? variance_pop(x) : 0.0;
  if (n < 8 || !(var > 0.0)) {
    for (int i = 0; i < kCanonical22FeatureCount; ++i) out.push_flagged();
    return out;
  }
  const auto z = c22::zscore(x);
  const auto acf = autocorrelation_fft(z, n - 1);
  if (acf.empty()) {  // numerically constant once demeaned
    for (int i = 0; i < kCanonical22FeatureCount; ++i) out.push_flagged();
    return out;
  }
  const std::size_t tau = c22::first_zero_crossing(acf);

  out.push_checked(c22::histogram_mode(z, 5));
  out.push_checked(c22::histogram_mode(z, 10));
  out.push_checked(c22::first_e_crossing(acf));
  out.push_checked(c22::first_local_min(acf));
  out.push_checked(c22::histogram_ami(z, 2, 5));

  {  // time reversibility: mean cubed successive difference
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double d = z[i + 1] - z[i];
      s += d * d * d;
    }
    out.push_checked(s / static_cast<double>(n - 1));
  }
  {  // proportion of successive differences exceeding 0.04 sigma
    int cnt = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (std::abs(z[i + 1] - z[i]) > 0.04) ++cnt;
    out.push_checked(static_cast<double>(cnt) / static_cast<double>(n - 1));
  }
  {  // longest stretch above the mean
    std::vector<std::uint8_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = z[i] > 0.0 ? 1 : 0;
    out.push_checked(c22::longest_run(b, 1));
  }

  out.push_checked(c22::transition3_trace_cov(z, tau));
  out.push_checked(c22::periodicity_wang(z));
  out.push_checked(c22::embed2_dist_expfit_meandiff(z, tau));

  {  // gaussian automutual information, first minimum over lags 1..40
    const std::size_t max_tau = std::min<std::size_t>(40, acf.size() - 1);
    if (max_tau < 2) {
      out.push_flagged();
    } else {
      std::vector<double> ami(max_tau + 1, std::numeric_limits<double>::infinity());
      for (std::size_t t = 1; t <= max_tau; ++t) {
        const double r2 = acf[t] * acf[t];
        ami[t] = r2 < 1.0 ? -0.5 * std::log(1.0 - r2) : std::numeric_limits<double>::infinity();
      }
      out.push_checked(c22::first_local_min(ami));
    }
  }

  {  // forecast-by-previous-value residual timescale ratio
    const auto res = c22::local_mean_residuals(z, 1);
    const auto acf_res = autocorrelation_fft(res, res.size() - 1);
    if (acf_res.empty() || tau == 0)
      out.push_flagged();
    else
      out.push_checked(static_cast<double>(c22::first_zero_crossing(acf_res)) /
                       static_cast<double>(tau));
  }

  out.push_checked(c22::outlier_timing(z, true));
  out.push_checked(c22::outlier_timing(z, false));

  const auto spec = c22::periodogram(z);
  out.push_checked(c22::spectral_area_low5th(spec));

  {  // longest stretch of decreasing successive differences
    std::vector<std::uint8_t> b(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) b[i] = z[i + 1] - z[i] >= 0.0 ? 1 : 0;
    out.push_checked(c22::longest_run(b, 0));
  }

  out.push_checked(c22::motif3_pair_entropy(z));
  out.push_checked(c22::fluct_prop_r1(c22::fluctuation_curve(z, c22::FluctType::rs_range, 1)));
  out.push_checked(c22::fluct_prop_r1(c22::fluctuation_curve(z, c22::FluctType::dfa, 2)));
  out.push_checked(c22::spectral_centroid(spec));

  {  // std error of the 3-point local-mean forecast
    const auto res = c22::local_mean_residuals(z, 3);
    if (res.size() < 2)
      out.push_flagged();
    else
      out.push_checked(std::sqrt(variance_sample(res)));
  }
  return out;
}

}  // namespace ssig

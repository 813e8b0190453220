#pragma once

// Univariate ANOVA F-value feature ranking, top-k selection, and
// standardization with training-set statistics.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ssig/common.hpp"

namespace ssig {

namespace detail {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace detail

// Survival function of the F distribution: P(F(d1, d2) > f).
inline double f_distribution_sf(double f, double d1, double d2) {
  if (!(f >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(f)) return 0.0;
  return detail::incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

struct FTestResult {
  double f = 0.0;
  double p = 1.0;
};

// Two-group one-way ANOVA. Zero within-group variance with separated means
// yields the +infinity sentinel (ranked first) with p = 0; a column whose
// between- and within-variance both vanish is not computable (NaN).
inline FTestResult anova_f(std::span<const double> x, std::span<const int> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw Error("anova_f: length mismatch");
  double sum[2] = {0.0, 0.0};
  std::size_t cnt[2] = {0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error("anova_f: labels must be 0/1");
    sum[y[i]] += x[i];
    ++cnt[y[i]];
  }
  if (cnt[0] == 0 || cnt[1] == 0) throw Error("anova_f: both classes must be non-empty");
  const double mean0 = sum[0] / static_cast<double>(cnt[0]);
  const double mean1 = sum[1] / static_cast<double>(cnt[1]);
  const double grand = (sum[0] + sum[1]) / static_cast<double>(n);
  double ssw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = y[i] == 0 ? mean0 : mean1;
    ssw += (x[i] - m) * (x[i] - m);
  }
  const double ssb = static_cast<double>(cnt[0]) * (mean0 - grand) * (mean0 - grand) +
                     static_cast<double>(cnt[1]) * (mean1 - grand) * (mean1 - grand);
  const double d1 = 1.0;
  const double d2 = static_cast<double>(n) - 2.0;
  FTestResult r;
  if (ssw <= 0.0) {
    if (ssb > 0.0) {
      r.f = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    } else {
      r.f = std::numeric_limits<double>::quiet_NaN();
      r.p = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
  }
  r.f = (ssb / d1) / (ssw / d2);
  r.p = f_distribution_sf(r.f, d1, d2);
  return r;
}

struct SelectionResult {
  std::vector<std::size_t> selected;      // column indices, best first
  std::vector<std::string> names;         // of the selected columns
  std::vector<double> f_values;           // per candidate column (NaN = not computable)
  std::vector<double> p_values;           // per candidate column
  std::vector<double> means;              // training statistics of the selected columns
  std::vector<double> stds;               // population std, > 0 by construction
};

// Ranks columns by F-value (infinite sentinels first, then descending finite
// values; ties break toward the lower catalog index) and keeps the top k.
// Columns with zero variance or non-finite entries are unselectable.
inline SelectionResult select_k_best(const DenseMatrix& x, std::span<const int> y, std::size_t k,
                                     std::span<const std::string> names = {}) {
  if (x.rows != y.size()) throw Error("select_k_best: row/label mismatch");
  SelectionResult res;
  res.f_values.assign(x.cols, std::numeric_limits<double>::quiet_NaN());
  res.p_values.assign(x.cols, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> order;
  std::vector<double> col(x.rows);
  for (std::size_t c = 0; c < x.cols; ++c) {
    bool finite = true;
    for (std::size_t r = 0; r < x.rows; ++r) {
      col[r] = x.at(r, c);
      finite = finite && std::isfinite(col[r]);
    }
    if (!finite) continue;
    if (!(variance_pop(col) > 0.0)) continue;
    const FTestResult ft = anova_f(col, y);
    if (std::isnan(ft.f)) continue;
    res.f_values[c] = ft.f;
    res.p_values[c] = ft.p;
    order.push_back(c);
  }
  if (order.size() < k)
    throw Error("select_k_best: only " + std::to_string(order.size()) +
                " usable columns for k=" + std::to_string(k));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double fa = res.f_values[a], fb = res.f_values[b];
    if (fa != fb) return fa > fb;
    return a < b;
  });
  order.resize(k);
  res.selected = order;
  for (const std::size_t c : order) {
    if (!names.empty()) res.names.push_back(names[c]);
    for (std::size_t r = 0; r < x.rows; ++r) col[r] = x.at(r, c);
    const double m = mean_of(std::span<const double>(col.data(), x.rows));
    const double sd = std::sqrt(variance_pop(std::span<const double>(col.data(), x.rows)));
    res.means.push_back(m);
    res.stds.push_back(sd);
  }
  return res;
}

// Projects rows onto the selected columns and standardizes with the stored
// training statistics; usable for both training and held-out rows.
inline DenseMatrix project_standardized(const DenseMatrix& x, const SelectionResult& sel) {
  DenseMatrix out(x.rows, sel.selected.size());
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t j = 0; j < sel.selected.size(); ++j)
      out.at(r, j) = (x.at(r, sel.selected[j]) - sel.means[j]) / sel.stds[j];
  return out;
}

}  // namespace ssig

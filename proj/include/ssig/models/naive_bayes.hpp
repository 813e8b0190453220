#pragma once

// Gaussian naive Bayes with variance smoothing.

#include <cmath>
#include <span>
#include <vector>

#include "ssig/common.hpp"

namespace ssig {

struct GaussianNbModel {
  std::array<double, 2> log_prior{0.0, 0.0};
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> var;  // smoothed
};

// epsilon_rel scales the largest per-feature variance in the training data,
// and the result is added to every class-conditional variance.
inline GaussianNbModel train_gaussian_nb(const DenseMatrix& x, std::span<const int> y,
                                         double epsilon_rel = 1e-9) {
  GaussianNbModel m;
  std::array<std::size_t, 2> cnt{0, 0};
  for (const int v : y) ++cnt[static_cast<std::size_t>(v)];
  for (int k = 0; k < 2; ++k) {
    m.mean[k].assign(x.cols, 0.0);
    m.var[k].assign(x.cols, 0.0);
    m.log_prior[k] =
        std::log(static_cast<double>(cnt[static_cast<std::size_t>(k)]) / static_cast<double>(x.rows));
  }
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) m.mean[y[r]][c] += x.at(r, c);
  for (int k = 0; k < 2; ++k)
    for (auto& v : m.mean[k]) v /= static_cast<double>(cnt[static_cast<std::size_t>(k)]);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) {
      const double d = x.at(r, c) - m.mean[y[r]][c];
      m.var[y[r]][c] += d * d;
    }
  double max_var = 0.0;
  std::vector<double> col(x.rows);
  for (std::size_t c = 0; c < x.cols; ++c) {
    for (std::size_t r = 0; r < x.rows; ++r) col[r] = x.at(r, c);
    max_var = std::max(max_var, variance_pop(col));
  }
  const double eps = epsilon_rel * (max_var > 0.0 ? max_var : 1.0);
  for (int k = 0; k < 2; ++k)
    for (std::size_t c = 0; c < x.cols; ++c) {
      m.var[k][c] = m.var[k][c] / static_cast<double>(cnt[static_cast<std::size_t>(k)]) + eps;
    }
  return m;
}

// Posterior probability of class 1.
inline double gaussian_nb_score(const GaussianNbModel& m, std::span<const double> row) {
  double log_like[2];
  for (int k = 0; k < 2; ++k) {
    double ll = m.log_prior[k];
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double v = m.var[k][c];
      const double d = row[c] - m.mean[k][c];
      ll += -0.5 * std::log(2.0 * kPi * v) - d * d / (2.0 * v);
    }
    log_like[k] = ll;
  }
  const double mx = std::max(log_like[0], log_like[1]);
  const double e0 = std::exp(log_like[0] - mx);
  const double e1 = std::exp(log_like[1] - mx);
  return e1 / (e0 + e1);
}

}  // namespace ssig

#pragma once

// Linear SVM: L2-regularized hinge loss minimized by deterministic full-batch
// subgradient descent on a fixed 1/(lambda*t) schedule with iterate
// averaging over the tail. No sampling, so results are reproducible.

#include <cmath>
#include <span>
#include <vector>

#include "ssig/common.hpp"

namespace ssig {

struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1.0;
};

inline SvmModel train_svm(const DenseMatrix& x, std::span<const int> y, double lambda,
                          int iterations = 2000) {
  SvmModel m;
  m.lambda = lambda;
  m.weights.assign(x.cols, 0.0);
  std::vector<double> w_avg(x.cols, 0.0);
  double b_avg = 0.0;
  const int tail_start = iterations / 2;  // average the second half
  const auto n = static_cast<double>(x.rows);
  for (int t = 1; t <= iterations; ++t) {
    std::vector<double> sub(x.cols, 0.0);
    double sub_b = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      double z = m.bias;
      for (std::size_t c = 0; c < x.cols; ++c) z += m.weights[c] * x.at(r, c);
      const double s = y[r] == 1 ? 1.0 : -1.0;
      if (s * z < 1.0) {
        for (std::size_t c = 0; c < x.cols; ++c) sub[c] -= s * x.at(r, c);
        sub_b -= s;
      }
    }
    const double eta = 1.0 / (lambda * static_cast<double>(t + 1));
    for (std::size_t c = 0; c < x.cols; ++c)
      m.weights[c] -= eta * (lambda * m.weights[c] + sub[c] / n);
    m.bias -= eta * sub_b / n;
    // project onto the ||w|| <= 1/sqrt(lambda) ball
    double norm2 = 0.0;
    for (const double v : m.weights) norm2 += v * v;
    const double limit = 1.0 / std::sqrt(lambda);
    if (norm2 > limit * limit) {
      const double scale = limit / std::sqrt(norm2);
      for (auto& v : m.weights) v *= scale;
    }
    if (t > tail_start) {
      for (std::size_t c = 0; c < x.cols; ++c) w_avg[c] += m.weights[c];
      b_avg += m.bias;
    }
  }
  const auto tail = static_cast<double>(iterations - tail_start);
  for (std::size_t c = 0; c < x.cols; ++c) m.weights[c] = w_avg[c] / tail;
  m.bias = b_avg / tail;
  return m;
}

// Signed margin.
inline double svm_score(const SvmModel& m, std::span<const double> row) {
  double z = m.bias;
  for (std::size_t c = 0; c < row.size(); ++c) z += m.weights[c] * row[c];
  return z;
}

}  // namespace ssig

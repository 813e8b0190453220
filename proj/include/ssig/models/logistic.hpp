#pragma once

// L2-regularized logistic regression trained by full-batch gradient descent
// with Armijo backtracking. Deterministic: no randomness anywhere.

#include <cmath>
#include <span>
#include <vector>

#include "ssig/common.hpp"

namespace ssig {

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1.0;
};

namespace detail {
inline double softplus(double t) {
  if (t > 35.0) return t;
  if (t < -35.0) return std::exp(t);
  return std::log1p(std::exp(t));
}
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}
}  // namespace detail

// Mean negative log-likelihood plus (lambda/2)*||w||^2; bias unpenalized.
inline double logistic_loss(std::span<const double> w, double b, const DenseMatrix& x,
                            std::span<const int> y, double lambda) {
  double loss = 0.0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    double z = b;
    for (std::size_t c = 0; c < x.cols; ++c) z += w[c] * x.at(r, c);
    const double s = y[r] == 1 ? 1.0 : -1.0;
    loss += detail::softplus(-s * z);
  }
  loss /= static_cast<double>(x.rows);
  double reg = 0.0;
  for (const double v : w) reg += v * v;
  return loss + 0.5 * lambda * reg;
}

// Analytic gradient of logistic_loss; grad has x.cols entries for the weights
// followed by one entry for the bias.
inline std::vector<double> logistic_gradient(std::span<const double> w, double b,
                                             const DenseMatrix& x, std::span<const int> y,
                                             double lambda) {
  std::vector<double> grad(x.cols + 1, 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double z = b;
    for (std::size_t c = 0; c < x.cols; ++c) z += w[c] * x.at(r, c);
    const double s = y[r] == 1 ? 1.0 : -1.0;
    const double g = -s * detail::sigmoid(-s * z);
    for (std::size_t c = 0; c < x.cols; ++c) grad[c] += g * x.at(r, c);
    grad[x.cols] += g;
  }
  const auto n = static_cast<double>(x.rows);
  for (auto& v : grad) v /= n;
  for (std::size_t c = 0; c < x.cols; ++c) grad[c] += lambda * w[c];
  return grad;
}

inline LogisticModel train_logistic(const DenseMatrix& x, std::span<const int> y, double lambda,
                                    int max_iter = 10000, double tol = 1e-6) {
  LogisticModel m;
  m.lambda = lambda;
  m.weights.assign(x.cols, 0.0);
  double step = 1.0;
  double loss = logistic_loss(m.weights, m.bias, x, y, lambda);
  for (int it = 0; it < max_iter; ++it) {
    const auto grad = logistic_gradient(m.weights, m.bias, x, y, lambda);
    double gnorm2 = 0.0;
    for (const double g : grad) gnorm2 += g * g;
    if (std::sqrt(gnorm2) < tol) break;
    // Armijo backtracking from the last accepted step
    step = std::min(step * 2.0, 1e4);
    while (true) {
      std::vector<double> wt(x.cols);
      for (std::size_t c = 0; c < x.cols; ++c) wt[c] = m.weights[c] - step * grad[c];
      const double bt = m.bias - step * grad[x.cols];
      const double lt = logistic_loss(wt, bt, x, y, lambda);
      if (lt <= loss - 1e-4 * step * gnorm2 || step < 1e-12) {
        m.weights = std::move(wt);
        m.bias = bt;
        loss = lt;
        break;
      }
      step *= 0.5;
    }
  }
  return m;
}

// Class-1 probability.
inline double logistic_score(const LogisticModel& m, std::span<const double> row) {
  double z = m.bias;
  for (std::size_t c = 0; c < row.size(); ++c) z += m.weights[c] * row[c];
  return detail::sigmoid(z);
}

}  // namespace ssig

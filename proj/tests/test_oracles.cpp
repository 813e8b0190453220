#include <doctest.h>

#include "oracles.hpp"

// Sanity checks of the brute-force reference implementations themselves.

TEST_CASE("naive DFT of a constant series carries only the DC coefficient") {
  std::vector<double> x(32, 2.0);
  const auto spec = oracle::naive_dft(x);
  CHECK(spec[0].real() == doctest::Approx(64.0).epsilon(1e-12));
  for (std::size_t k = 1; k < spec.size(); ++k) CHECK(std::abs(spec[k]) < 1e-9);
}

TEST_CASE("pairwise AUC of perfectly ranked scores is 1") {
  const std::vector<double> scores = {0.1, 0.2, 0.8, 0.9};
  const std::vector<int> labels = {0, 0, 1, 1};
  CHECK(oracle::pairwise_auc(scores, labels) == 1.0);
}

TEST_CASE("direct ANOVA F of identical groups is 0") {
  const std::vector<double> x = {1, 2, 3, 1, 2, 3};
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};
  CHECK(oracle::anova_f_direct(x, y) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("KS statistic of identical samples is 0 and of disjoint samples is 1") {
  CHECK(oracle::ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(oracle::ks_statistic({1, 2, 3}, {10, 11, 12}) == 1.0);
}

TEST_CASE("Spearman correlation of a monotone relationship is 1") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {10, 20, 25, 90, 100};
  CHECK(oracle::spearman(a, b) == doctest::Approx(1.0));
  const std::vector<double> c = {100, 90, 25, 20, 10};
  CHECK(oracle::spearman(a, c) == doctest::Approx(-1.0));
}

TEST_CASE("log-log regression recovers a power-law exponent") {
  std::vector<double> x, y;
  for (int i = 1; i <= 20; ++i) {
    x.push_back(i);
    y.push_back(3.0 * std::pow(static_cast<double>(i), 0.7));
  }
  CHECK(oracle::loglog_slope(x, y) == doctest::Approx(0.7).epsilon(1e-9));
}

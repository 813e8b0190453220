#include <doctest.h>

#include "oracles.hpp"
#include "ssig/features/spectral_stat.hpp"
#include "ssig/fft.hpp"

using namespace ssig;

namespace {
int feature_index(const std::string& name) {
  const auto names = spectral_stat_feature_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}
}  // namespace

TEST_CASE("fft of a constant series is DC only") {
  std::vector<double> x(64, 3.7);
  const auto spec = fft(x);
  CHECK(spec[0].real() == doctest::Approx(3.7 * 64).epsilon(1e-12));
  CHECK(spec[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t k = 1; k < spec.size(); ++k) CHECK(std::abs(spec[k]) <= 1e-9);
}

TEST_CASE("fft of cos(2 pi 2 n / 64) has |X_2| = 32") {
  std::vector<double> x(64);
  for (int n = 0; n < 64; ++n) x[n] = std::cos(2.0 * kPi * 2.0 * n / 64.0);
  const auto spec = fft(x);
  CHECK(std::abs(spec[2]) == doctest::Approx(32.0).epsilon(1e-9));
  CHECK(std::abs(spec[62]) == doctest::Approx(32.0).epsilon(1e-9));
  // verified against the naive definition as well
  const auto naive = oracle::naive_dft(x);
  CHECK(std::abs(naive[2]) == doctest::Approx(32.0).epsilon(1e-9));
}

TEST_CASE("fft matches the naive DFT for random series up to N = 512") {
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 3 + uniform_below(rng, 510);
    std::vector<double> x(n);
    for (auto& v : x) v = normal01(rng);
    // the library pads to a power of two; the oracle transforms the padded data
    std::vector<double> padded(fft_pad_length(n), 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    const auto got = fft(x);
    const auto expected = oracle::naive_dft(padded);
    REQUIRE(got.size() == expected.size());
    for (std::size_t k = 0; k < got.size(); ++k)
      CHECK(std::abs(got[k] - expected[k]) <= 1e-9);
  }
}

TEST_CASE("spectral_stat catalog has exactly 78 uniquely named features") {
  const auto names = spectral_stat_feature_names();
  CHECK(names.size() == kSpectralStatFeatureCount);
  auto sorted = names;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("spectral_stat of [1,2,3] has mean 2, slope 1, mean-abs-change 1") {
  const auto slice = extract_spectral_stat(std::vector<double>{1.0, 2.0, 3.0});
  REQUIRE(slice.size() == kSpectralStatFeatureCount);
  CHECK(slice.values[feature_index("mean")] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(slice.values[feature_index("trend_slope")] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(slice.values[feature_index("mean_abs_change")] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(slice.values[feature_index("mean_change")] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(slice.values[feature_index("sample_count")] == 3.0);
  CHECK(slice.values[feature_index("duration_s")] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("spectral_stat of a constant series is degenerate but finite") {
  const auto slice = extract_spectral_stat(std::vector<double>(64, 2.5));
  CHECK(slice.values[feature_index("variance")] == 0.0);
  CHECK(slice.values[feature_index("trend_slope")] == doctest::Approx(0.0).epsilon(1e-12));
  for (int k = 1; k <= 10; ++k)
    for (const char* part : {"real", "imag", "abs", "angle"}) {
      const int idx = feature_index("fft_k" + std::to_string(k) + "_" + part);
      CHECK(slice.values[idx] == doctest::Approx(0.0).epsilon(1e-9));
    }
  // moments that divide by the variance are flagged with fallback 0
  CHECK(slice.flagged[feature_index("skewness")] == 1);
  CHECK(slice.flagged[feature_index("acf_lag1")] == 1);
  CHECK(slice.values[feature_index("skewness")] == 0.0);
}

TEST_CASE("spectral_stat flags everything for series shorter than 3") {
  const auto slice = extract_spectral_stat(std::vector<double>{1.0, 2.0});
  for (std::size_t i = 0; i < slice.size(); ++i) {
    CHECK(slice.flagged[i] == 1);
    CHECK(slice.values[i] == 0.0);
  }
}

TEST_CASE("autocorrelation features match the direct covariance-ratio oracle") {
  Rng rng(123);
  std::vector<double> x(300);
  for (auto& v : x) v = normal01(rng) + 0.3 * std::sin(0.1 * static_cast<double>(&v - x.data()));
  const auto slice = extract_spectral_stat(x);
  const double mean = mean_of(x);
  const double var = variance_pop(x);
  for (std::size_t lag = 1; lag <= 5; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < x.size(); ++i) s += (x[i] - mean) * (x[i + lag] - mean);
    const double expected = s / (static_cast<double>(x.size() - lag) * var);
    const int idx = feature_index("acf_lag" + std::to_string(lag));
    CHECK(slice.values[idx] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("order statistics and moments are reversal invariant") {
  Rng rng(7);
  std::vector<double> x(128);
  for (auto& v : x) v = normal01(rng);
  std::vector<double> rev(x.rbegin(), x.rend());
  const auto a = extract_spectral_stat(x);
  const auto b = extract_spectral_stat(rev);
  for (const char* f : {"min", "max", "mean", "variance", "median", "q10", "q90", "abs_energy"}) {
    const int idx = feature_index(f);
    CHECK(a.values[idx] == doctest::Approx(b.values[idx]).epsilon(1e-12));
  }
  // the trend reverses sign
  CHECK(a.values[feature_index("trend_slope")] ==
        doctest::Approx(-b.values[feature_index("trend_slope")]).epsilon(1e-9));
}

#pragma once

// Radix-2 FFT plus the autocorrelation helper built on top of it.
// Inputs of arbitrary length are zero-padded to the next power of two of at
// least 16 samples so that the first eleven coefficients always exist.

#include <complex>
#include <span>
#include <vector>

#include "ssig/common.hpp"

namespace ssig {

inline std::size_t fft_pad_length(std::size_t n) {
  std::size_t p = 16;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative Cooley-Tukey; length must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw Error("fft_pow2: length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

// X_k = sum_n x_n * exp(-2*pi*i*k*n/N) over the zero-padded input.
inline std::vector<std::complex<double>> fft(std::span<const double> x) {
  if (x.empty()) throw Error("fft: empty input");
  std::vector<std::complex<double>> a(fft_pad_length(x.size()), {0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = {x[i], 0.0};
  fft_pow2(a);
  return a;
}

// Normalized autocorrelation acf[0..max_lag], acf[0] = 1; computed via FFT of
// the demeaned series. Returns an empty vector when the series is constant.
inline std::vector<double> autocorrelation_fft(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  if (ss <= 0.0) return {};
  std::size_t p = 1;
  while (p < 2 * n) p <<= 1;
  std::vector<std::complex<double>> a(p, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) a[i] = {x[i] - m, 0.0};
  fft_pow2(a);
  for (auto& c : a) c = c * std::conj(c);
  fft_pow2(a, true);
  max_lag = std::min(max_lag, n - 1);
  std::vector<double> acf(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) acf[k] = a[k].real() / ss;
  acf[0] = 1.0;
  return acf;
}

}  // namespace ssig

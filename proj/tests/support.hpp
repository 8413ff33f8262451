#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "zenolab/statespace.hpp"

namespace zt {

using zenolab::Complex;
using zenolab::Grid;
using zenolab::WaveFunction;

inline Grid default_grid() { return Grid(-40.0, 40.0, 4096); }
/// k_max ~ 8: series and power iteration stay clear of FFT round-off blow-up.
inline Grid coarse_grid() { return Grid(-800.0, 800.0, 4096); }

/// Continuum Gaussian wavepacket, normalized in L2.
inline Complex gaussian_value(double x, double center, double sigma, double k0 = 0.0) {
  const double amp = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  const double u = (x - center) / sigma;
  return std::polar(amp * std::exp(-0.25 * u * u), k0 * x);
}

/// Phi(x) from the series, independent of erfc.
inline double normal_cdf_series(double x) {
  // Phi(x) = 1/2 + phi(x) * sum x^(2k+1) / (2k+1)!!
  double term = x;
  double sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= x * x / (2.0 * k + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return 0.5 + sum * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double double_factorial_odd(int n) {
  double v = 1.0;
  for (int k = 2 * n - 1; k > 1; k -= 2) v *= k;
  return v;
}

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  std::uint64_t seed() { return rng(); }
};

}  // namespace zt

#pragma once

// Discretized one-dimensional Hilbert space: uniform periodic grids, small
// dense spaces for matrix models, and wavefunctions living on either.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace zenolab {

using Complex = std::complex<double>;

/// Uniform periodic sampling of [x_min, x_max).
///
/// Samples sit at x_j = x_min + j*dx, j = 0..n_points-1, with
/// dx = (x_max - x_min) / n_points. The point count must be a power of two
/// so the Fourier pathways apply, and index arithmetic wraps modulo n_points.
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n_points() const { return n_points_; }
  double dx() const { return dx_; }
  double length() const { return x_max_ - x_min_; }

  double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }

  /// Discrete wavenumber of FFT index m in the symmetric layout; the Nyquist
  /// index n/2 maps to +k_max.
  double wavenumber(std::size_t m) const;
  double k_max() const;

  bool contains(double x) const { return x >= x_min_ && x <= x_max_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dx_;
};

/// Finite-dimensional coordinate space C^dim with the unweighted inner product.
struct DenseSpace {
  std::size_t dim;
  friend bool operator==(const DenseSpace&, const DenseSpace&) = default;
};

/// Either a Grid (inner-product weight dx) or a DenseSpace (weight 1).
class Space {
 public:
  Space(Grid grid) : rep_(grid) {}
  Space(DenseSpace dense);

  std::size_t size() const;
  double weight() const;
  bool is_grid() const { return std::holds_alternative<Grid>(rep_); }
  /// Throws ShapeError for dense spaces.
  const Grid& grid() const;
  std::string describe() const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  std::variant<Grid, DenseSpace> rep_;
};

/// Complex amplitude samples on a Space. Amplitudes carry units of
/// length^(-1/2) on grids so that sum |psi_j|^2 dx is a probability.
class WaveFunction {
 public:
  WaveFunction(Space space, std::vector<Complex> amplitudes);
  static WaveFunction zeros(Space space);

  const Space& space() const { return space_; }
  std::size_t size() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t j) const { return amplitudes_[j]; }

  /// Moves the samples out; used by kernels building a new state in place.
  std::vector<Complex> release() && { return std::move(amplitudes_); }

  WaveFunction& operator+=(const WaveFunction& other);
  WaveFunction& operator-=(const WaveFunction& other);
  WaveFunction& operator*=(Complex factor);

  friend WaveFunction operator+(WaveFunction a, const WaveFunction& b) { return a += b; }
  friend WaveFunction operator-(WaveFunction a, const WaveFunction& b) { return a -= b; }
  friend WaveFunction operator*(Complex c, WaveFunction a) { return a *= c; }

 private:
  Space space_;
  std::vector<Complex> amplitudes_;
};

/// Throws ShapeError unless both states share a space.
void require_same_space(const WaveFunction& a, const WaveFunction& b);

/// Riemann-sum inner product sum_j conj(psi_j) phi_j w, conjugate-linear in psi.
Complex inner_product(const WaveFunction& psi, const WaveFunction& phi);
double norm_squared(const WaveFunction& psi);
double norm(const WaveFunction& psi);
/// Largest pointwise modulus of a - b.
double max_abs_difference(const WaveFunction& a, const WaveFunction& b);

/// Returns psi / ||psi||. Throws DomainError for the zero vector.
WaveFunction normalized(const WaveFunction& psi);

/// Normalized Gaussian (2 pi sigma^2)^(-1/4) exp(-(x-c)^2/(4 sigma^2)) exp(i k0 x).
/// Requires [center - 8 sigma, center + 8 sigma] inside the grid domain.
WaveFunction make_gaussian(const Grid& grid, double center, double sigma, double k0 = 0.0);

/// Normalized C-infinity bump exp(-1/(1-u^2)) on [support_lo, support_hi],
/// exactly zero outside the open support.
WaveFunction make_bump(const Grid& grid, double support_lo, double support_hi);

/// Sampled plane wave exp(i k_m x) for FFT index m (an exact eigenvector of
/// the grid momentum operator), normalized.
WaveFunction make_plane_wave(const Grid& grid, std::size_t mode);

/// Normalized random state whose Fourier coefficients vanish for |k| > k_cut.
/// Deterministic for a given seed.
WaveFunction make_random_band_limited(const Grid& grid, double k_cut, std::uint64_t seed);

/// Normalized random vector on a dense space, deterministic for a given seed.
WaveFunction make_random_dense(DenseSpace space, std::uint64_t seed);

/// Basis vector e_index of a dense space.
WaveFunction make_basis_vector(DenseSpace space, std::size_t index);

}  // namespace zenolab

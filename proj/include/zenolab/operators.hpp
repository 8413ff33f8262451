#pragma once

// Self-adjoint operators in spectral form and the unitary group they generate.
//
// Every operator is stored as a unitary change of basis plus one real
// eigenvalue per basis index, so functions of the operator (in particular the
// propagator exp(-i t H)) are evaluated through the spectral decomposition and
// are valid for every state. The truncated power series is kept separate: it
// agrees with the spectral route only where the exponential series converges.

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "zenolab/statespace.hpp"

namespace zenolab {

class SpectralOperator {
 public:
  enum class Basis { Fourier, Identity, Dense };

  /// Fourier-diagonal operator on a grid: eigenvalue[m] multiplies FFT mode m.
  static SpectralOperator fourier_diagonal(const Grid& grid, std::vector<double> eigenvalues);
  /// Multiplication operator: eigenvalue[j] multiplies sample j.
  static SpectralOperator position_diagonal(Space space, std::vector<double> eigenvalues);
  /// Dense operator V diag(eigenvalues) V^dagger on C^n. V must be unitary.
  static SpectralOperator dense(Eigen::MatrixXcd eigenvectors, std::vector<double> eigenvalues);

  Basis basis() const;
  const Space& space() const;
  std::span<const double> eigenvalues() const;
  /// max |eigenvalue|, the operator norm.
  double spectral_radius() const;

  std::vector<Complex> to_eigenbasis(const WaveFunction& psi) const;
  WaveFunction from_eigenbasis(std::span<const Complex> coefficients) const;

  /// f(H) psi for f given by its values on the spectrum.
  WaveFunction apply_multipliers(const WaveFunction& psi, std::span<const Complex> multipliers) const;
  /// H psi.
  WaveFunction apply(const WaveFunction& psi) const;

  /// For dense operators: the eigenvector matrix V (columns). Throws otherwise.
  const Eigen::MatrixXcd& eigenvectors() const;

 private:
  struct Impl;
  explicit SpectralOperator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Grid momentum operator -i d/dx, diagonal in the discrete Fourier basis
/// with the symmetric wavenumber layout (Nyquist mode mapped to +k_max).
SpectralOperator momentum_operator(const Grid& grid);

/// Eigendecomposition of a Hermitian matrix. Throws ValidationError when the
/// input deviates from Hermitian by more than 1e-12 or the reconstruction
/// error exceeds 1e-10.
SpectralOperator dense_hermitian(const Eigen::MatrixXcd& matrix);

/// U(t) = exp(-i t H) with hbar = 1.
///
/// Two realizations share this interface: the spectral route through a
/// SpectralOperator, and the exact lattice translation f(x) -> f(x - t) that
/// only accepts times commensurate with the grid spacing. The adjoint U(t)^dagger
/// is U(-t) for both.
class Propagator {
 public:
  explicit Propagator(SpectralOperator generator);
  /// Exact circular shift by t/dx samples; evolve() throws DomainError for
  /// times that are not integer multiples of dx (to 1e-9 relative).
  static Propagator exact_translation(const Grid& grid);

  const Space& space() const;
  bool is_exact_translation() const { return !generator_.has_value(); }
  /// Throws std::logic_error for exact translations.
  const SpectralOperator& generator() const;

  WaveFunction evolve(const WaveFunction& psi, double t) const;
  WaveFunction evolve_adjoint(const WaveFunction& psi, double t) const { return evolve(psi, -t); }

  /// Grid step count for t on an exact translation; throws if incommensurate.
  long long commensurate_steps(double t) const;

 private:
  explicit Propagator(Grid grid);
  std::optional<SpectralOperator> generator_;
  Space space_;
};

/// exp(-i t H) psi through the eigenbasis.
WaveFunction evolve_spectral(const Propagator& propagator, const WaveFunction& psi, double t);

/// psi_j -> psi_{j - n_steps mod n}: the translation [U(t)f](x) = f(x - t)
/// for t = n_steps * dx. Bit-reproducible.
WaveFunction evolve_exact_shift(const WaveFunction& psi, long long n_steps);

struct SeriesResult {
  WaveFunction state;
  /// ||H^n psi|| |t|^n / n! for n = n_terms, the first omitted term.
  double tail_estimate = 0.0;
  /// Some term norm exceeded kDivergenceFactor * ||psi|| or overflowed.
  bool diverged = false;
  std::optional<std::size_t> divergence_index;
};

/// A term whose norm exceeds this multiple of ||psi|| flags divergence.
inline constexpr double kDivergenceFactor = 1e12;

/// Partial sum sum_{n < n_terms} (1/n!) (t H / i)^n psi by iterated application
/// of H with the running term t_{n+1} = (t / (i (n+1))) H t_n. Requires n_terms >= 1.
SeriesResult evolve_series(const SpectralOperator& h, const WaveFunction& psi, double t,
                           std::size_t n_terms);

/// Visits every partial sum S_1, S_2, ..., S_{n_max} (S_n has n terms) in one
/// pass. visit(n, partial_sum, diverged_so_far).
template <class Visitor>
void for_each_partial_sum(const SpectralOperator& h, const WaveFunction& psi, double t, std::size_t n_max,
                          Visitor&& visit);

/// Forward-difference residual ||i (U(t) psi - psi)/t - H psi|| for each t.
/// Times must be strictly positive and strictly decreasing.
std::vector<double> stone_residual(const SpectralOperator& h, const WaveFunction& psi,
                                   std::span<const double> t_list);

// ---------------------------------------------------------------------------

namespace detail {
/// One step of the series recurrence: returns (t / (i (n+1))) H term.
WaveFunction next_series_term(const SpectralOperator& h, const WaveFunction& term, double t, std::size_t n);
bool term_diverged(double term_norm, double psi_norm);
}  // namespace detail

template <class Visitor>
void for_each_partial_sum(const SpectralOperator& h, const WaveFunction& psi, double t, std::size_t n_max,
                          Visitor&& visit) {
  const double psi_norm = norm(psi);
  WaveFunction term = psi;
  WaveFunction sum = psi;
  bool diverged = false;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) {
      term = detail::next_series_term(h, term, t, n - 2);
      diverged = diverged || detail::term_diverged(norm(term), psi_norm);
      sum += term;
    }
    visit(n, static_cast<const WaveFunction&>(sum), diverged);
  }
}

}  // namespace zenolab

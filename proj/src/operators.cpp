#include "zenolab/operators.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "zenolab/errors.hpp"

namespace zenolab {

struct SpectralOperator::Impl {
  Basis basis;
  Space space;
  std::vector<double> eigenvalues;
  std::optional<detail::UnitaryDft> dft;
  Eigen::MatrixXcd eigenvectors;
};

SpectralOperator SpectralOperator::fourier_diagonal(const Grid& grid, std::vector<double> eigenvalues) {
  if (eigenvalues.size() != grid.n_points()) throw ShapeError("one eigenvalue per Fourier mode required");
  auto impl = std::make_shared<Impl>(Impl{Basis::Fourier, Space(grid), std::move(eigenvalues),
                                          detail::UnitaryDft(grid.n_points()), {}});
  return SpectralOperator(std::move(impl));
}

SpectralOperator SpectralOperator::position_diagonal(Space space, std::vector<double> eigenvalues) {
  if (eigenvalues.size() != space.size()) throw ShapeError("one eigenvalue per sample required");
  auto impl = std::make_shared<Impl>(Impl{Basis::Identity, std::move(space), std::move(eigenvalues), {}, {}});
  return SpectralOperator(std::move(impl));
}

SpectralOperator SpectralOperator::dense(Eigen::MatrixXcd eigenvectors, std::vector<double> eigenvalues) {
  const auto n = static_cast<std::size_t>(eigenvectors.rows());
  if (eigenvectors.cols() != eigenvectors.rows() || eigenvalues.size() != n) {
    throw ShapeError("dense operator needs a square eigenvector matrix and one eigenvalue per column");
  }
  const double defect =
      (eigenvectors.adjoint() * eigenvectors - Eigen::MatrixXcd::Identity(eigenvectors.rows(), eigenvectors.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (defect > 1e-10) throw ValidationError(fmt::format("eigenvector matrix is not unitary (defect {:.3e})", defect));
  auto impl = std::make_shared<Impl>(
      Impl{Basis::Dense, Space(DenseSpace{n}), std::move(eigenvalues), {}, std::move(eigenvectors)});
  return SpectralOperator(std::move(impl));
}

SpectralOperator::Basis SpectralOperator::basis() const { return impl_->basis; }
const Space& SpectralOperator::space() const { return impl_->space; }
std::span<const double> SpectralOperator::eigenvalues() const { return impl_->eigenvalues; }

double SpectralOperator::spectral_radius() const {
  double r = 0.0;
  for (double l : impl_->eigenvalues) r = std::max(r, std::abs(l));
  return r;
}

const Eigen::MatrixXcd& SpectralOperator::eigenvectors() const {
  if (impl_->basis != Basis::Dense) throw std::logic_error("eigenvector matrix only stored for dense operators");
  return impl_->eigenvectors;
}

std::vector<Complex> SpectralOperator::to_eigenbasis(const WaveFunction& psi) const {
  if (!(psi.space() == impl_->space)) {
    throw ShapeError(fmt::format("state on {} but operator on {}", psi.space().describe(), impl_->space.describe()));
  }
  switch (impl_->basis) {
    case Basis::Fourier:
      return impl_->dft->forward(psi.amplitudes());
    case Basis::Identity:
      return {psi.amplitudes().begin(), psi.amplitudes().end()};
    case Basis::Dense: {
      const auto amps = psi.amplitudes();
      Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
      Eigen::VectorXcd c = impl_->eigenvectors.adjoint() * v;
      return {c.data(), c.data() + c.size()};
    }
  }
  throw std::logic_error("unreachable basis kind");
}

WaveFunction SpectralOperator::from_eigenbasis(std::span<const Complex> coefficients) const {
  if (coefficients.size() != impl_->space.size()) throw ShapeError("coefficient count does not match operator space");
  switch (impl_->basis) {
    case Basis::Fourier:
      return WaveFunction(impl_->space, impl_->dft->inverse(coefficients));
    case Basis::Identity:
      return WaveFunction(impl_->space, {coefficients.begin(), coefficients.end()});
    case Basis::Dense: {
      Eigen::Map<const Eigen::VectorXcd> c(coefficients.data(), static_cast<Eigen::Index>(coefficients.size()));
      Eigen::VectorXcd v = impl_->eigenvectors * c;
      return WaveFunction(impl_->space, {v.data(), v.data() + v.size()});
    }
  }
  throw std::logic_error("unreachable basis kind");
}

WaveFunction SpectralOperator::apply_multipliers(const WaveFunction& psi, std::span<const Complex> multipliers) const {
  auto c = to_eigenbasis(psi);
  if (multipliers.size() != c.size()) throw ShapeError("one multiplier per eigenvalue required");
  for (std::size_t m = 0; m < c.size(); ++m) c[m] *= multipliers[m];
  return from_eigenbasis(c);
}

WaveFunction SpectralOperator::apply(const WaveFunction& psi) const {
  auto c = to_eigenbasis(psi);
  const auto& lambda = impl_->eigenvalues;
  for (std::size_t m = 0; m < c.size(); ++m) c[m] *= lambda[m];
  return from_eigenbasis(c);
}

SpectralOperator momentum_operator(const Grid& grid) {
  std::vector<double> k(grid.n_points());
  for (std::size_t m = 0; m < k.size(); ++m) k[m] = grid.wavenumber(m);
  return SpectralOperator::fourier_diagonal(grid, std::move(k));
}

SpectralOperator dense_hermitian(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw ShapeError("Hermitian matrix must be square");
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) throw ValidationError(fmt::format("matrix is not Hermitian (max |M - M^dagger| = {:.3e})", asym));
  const Eigen::MatrixXcd sym = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) throw ValidationError("Hermitian eigendecomposition did not converge");
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  const Eigen::VectorXd& w = solver.eigenvalues();
  const double recon = (v * w.asDiagonal() * v.adjoint() - matrix).cwiseAbs().maxCoeff();
  if (recon > 1e-10) throw ValidationError(fmt::format("eigendecomposition reconstruction error {:.3e}", recon));
  return SpectralOperator::dense(v, std::vector<double>(w.data(), w.data() + w.size()));
}

Propagator::Propagator(SpectralOperator generator) : generator_(generator), space_(generator.space()) {}

Propagator::Propagator(Grid grid) : generator_(std::nullopt), space_(grid) {}

Propagator Propagator::exact_translation(const Grid& grid) { return Propagator(grid); }

const Space& Propagator::space() const { return space_; }

const SpectralOperator& Propagator::generator() const {
  if (!generator_) throw std::logic_error("exact translation has no stored spectral generator");
  return *generator_;
}

long long Propagator::commensurate_steps(double t) const {
  const double dx = space_.grid().dx();
  const double steps = std::round(t / dx);
  if (std::abs(t - steps * dx) > 1e-9 * dx) {
    throw DomainError(fmt::format("time {} is not a multiple of the grid spacing {}", t, dx));
  }
  return static_cast<long long>(steps);
}

WaveFunction Propagator::evolve(const WaveFunction& psi, double t) const {
  if (!(psi.space() == space_)) {
    throw ShapeError(fmt::format("state on {} but propagator on {}", psi.space().describe(), space_.describe()));
  }
  if (!generator_) return evolve_exact_shift(psi, commensurate_steps(t));
  // exp(0) = 1 exactly; skip the basis round trip.
  if (t == 0.0) return psi;
  const auto lambda = generator_->eigenvalues();
  std::vector<Complex> phases(lambda.size());
  for (std::size_t m = 0; m < lambda.size(); ++m) phases[m] = std::polar(1.0, -lambda[m] * t);
  return generator_->apply_multipliers(psi, phases);
}

WaveFunction evolve_spectral(const Propagator& propagator, const WaveFunction& psi, double t) {
  return propagator.evolve(psi, t);
}

WaveFunction evolve_exact_shift(const WaveFunction& psi, long long n_steps) {
  const auto n = static_cast<long long>(psi.size());
  const long long shift = ((n_steps % n) + n) % n;
  const auto src = psi.amplitudes();
  std::vector<Complex> out(src.size());
  for (long long j = 0; j < n; ++j) out[static_cast<std::size_t>((j + shift) % n)] = src[static_cast<std::size_t>(j)];
  return WaveFunction(psi.space(), std::move(out));
}

namespace detail {

WaveFunction next_series_term(const SpectralOperator& h, const WaveFunction& term, double t, std::size_t n) {
  // (t / (i (n+1))) = -i t / (n+1)
  const Complex factor(0.0, -t / static_cast<double>(n + 1));
  return factor * h.apply(term);
}

bool term_diverged(double term_norm, double psi_norm) {
  return !std::isfinite(term_norm) || term_norm > kDivergenceFactor * psi_norm;
}

}  // namespace detail

SeriesResult evolve_series(const SpectralOperator& h, const WaveFunction& psi, double t, std::size_t n_terms) {
  if (n_terms < 1) throw std::invalid_argument("evolve_series needs at least one term");
  const double psi_norm = norm(psi);
  SeriesResult result{psi, 0.0, false, std::nullopt};
  WaveFunction term = psi;
  for (std::size_t n = 0; n < n_terms; ++n) {
    term = detail::next_series_term(h, term, t, n);
    const double term_norm = norm(term);
    if (detail::term_diverged(term_norm, psi_norm) && !result.diverged) {
      result.diverged = true;
      result.divergence_index = n + 1;
    }
    if (n + 1 == n_terms) {
      result.tail_estimate = term_norm;
    } else {
      result.state += term;
    }
  }
  return result;
}

std::vector<double> stone_residual(const SpectralOperator& h, const WaveFunction& psi, std::span<const double> t_list) {
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0)) throw std::invalid_argument("Stone residual times must be strictly positive");
    if (i > 0 && !(t_list[i] < t_list[i - 1])) {
      throw std::invalid_argument("Stone residual times must be strictly decreasing");
    }
  }
  // i (U(t) psi - psi) / t - H psi has symbol lambda (e^z - 1 - z) / z with
  // z = -i lambda t. Forming the difference quotient on states loses eps / t
  // to cancellation, so the symbol is evaluated directly.
  const auto lambdas = h.eigenvalues();
  std::vector<Complex> symbol(lambdas.size());
  std::vector<double> residuals;
  residuals.reserve(t_list.size());
  for (double t : t_list) {
    for (std::size_t m = 0; m < lambdas.size(); ++m) {
      const Complex z(0.0, -lambdas[m] * t);
      Complex g = 0.0;
      if (std::abs(z) < 0.5) {
        Complex term = 1.0;
        for (int k = 1; k < 30; ++k) {
          term *= z / static_cast<double>(k + 1);
          g += term;
        }
      } else {
        g = (std::exp(z) - 1.0 - z) / z;
      }
      symbol[m] = lambdas[m] * g;
    }
    residuals.push_back(norm(h.apply_multipliers(psi, symbol)));
  }
  return residuals;
}

}  // namespace zenolab

#include "zenolab/statespace.hpp"

#include <fmt/format.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "fft.hpp"
#include "zenolab/errors.hpp"

namespace zenolab {

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), dx_(0.0) {
  if (n_points < 2 || !std::has_single_bit(n_points)) {
    throw DomainError(fmt::format("grid point count {} is not a power of two >= 2", n_points));
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw DomainError(fmt::format("grid bounds [{}, {}] are not an increasing finite interval", x_min, x_max));
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points);
}

double Grid::wavenumber(std::size_t m) const {
  const double dk = 2.0 * std::numbers::pi / length();
  const auto n = static_cast<std::ptrdiff_t>(n_points_);
  auto idx = static_cast<std::ptrdiff_t>(m);
  if (idx > n / 2) idx -= n;
  return dk * static_cast<double>(idx);
}

double Grid::k_max() const { return std::numbers::pi / dx_; }

Space::Space(DenseSpace dense) : rep_(dense) {
  if (dense.dim == 0) throw DomainError("dense space must have positive dimension");
}

std::size_t Space::size() const {
  return std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Grid>) {
          return s.n_points();
        } else {
          return s.dim;
        }
      },
      rep_);
}

double Space::weight() const {
  if (const auto* g = std::get_if<Grid>(&rep_)) return g->dx();
  return 1.0;
}

const Grid& Space::grid() const {
  if (const auto* g = std::get_if<Grid>(&rep_)) return *g;
  throw ShapeError("operation requires a grid space, got a dense space");
}

std::string Space::describe() const {
  if (const auto* g = std::get_if<Grid>(&rep_)) {
    return fmt::format("grid[{}, {}) x {}", g->x_min(), g->x_max(), g->n_points());
  }
  return fmt::format("dense({})", std::get<DenseSpace>(rep_).dim);
}

WaveFunction::WaveFunction(Space space, std::vector<Complex> amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.size()) {
    throw ShapeError(fmt::format("{} amplitudes supplied for {}", amplitudes_.size(), space_.describe()));
  }
}

WaveFunction WaveFunction::zeros(Space space) {
  const std::size_t n = space.size();
  return WaveFunction(std::move(space), std::vector<Complex>(n));
}

WaveFunction& WaveFunction::operator+=(const WaveFunction& other) {
  require_same_space(*this, other);
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) amplitudes_[j] += other.amplitudes_[j];
  return *this;
}

WaveFunction& WaveFunction::operator-=(const WaveFunction& other) {
  require_same_space(*this, other);
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) amplitudes_[j] -= other.amplitudes_[j];
  return *this;
}

WaveFunction& WaveFunction::operator*=(Complex factor) {
  for (auto& a : amplitudes_) a *= factor;
  return *this;
}

void require_same_space(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.space() == b.space())) {
    throw ShapeError(fmt::format("space mismatch: {} vs {}", a.space().describe(), b.space().describe()));
  }
}

Complex inner_product(const WaveFunction& psi, const WaveFunction& phi) {
  require_same_space(psi, phi);
  Complex acc{0.0, 0.0};
  const auto a = psi.amplitudes();
  const auto b = phi.amplitudes();
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::conj(a[j]) * b[j];
  return acc * psi.space().weight();
}

double norm_squared(const WaveFunction& psi) {
  double acc = 0.0;
  for (const auto& a : psi.amplitudes()) acc += std::norm(a);
  return acc * psi.space().weight();
}

double norm(const WaveFunction& psi) { return std::sqrt(norm_squared(psi)); }

double max_abs_difference(const WaveFunction& a, const WaveFunction& b) {
  require_same_space(a, b);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

WaveFunction normalized(const WaveFunction& psi) {
  const double n = norm(psi);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite state");
  return Complex(1.0 / n, 0.0) * psi;
}

WaveFunction make_gaussian(const Grid& grid, double center, double sigma, double k0) {
  if (!(sigma > 0.0)) throw DomainError(fmt::format("gaussian width must be positive, got {}", sigma));
  const double lo = center - 8.0 * sigma;
  const double hi = center + 8.0 * sigma;
  if (lo < grid.x_min() || hi > grid.x_max()) {
    throw DomainError(fmt::format("gaussian 8-sigma tails [{}, {}] leave the grid domain [{}, {}]", lo, hi,
                                  grid.x_min(), grid.x_max()));
  }
  const double prefactor = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  std::vector<Complex> amps(grid.n_points());
  for (std::size_t j = 0; j < amps.size(); ++j) {
    const double x = grid.x(j);
    const double u = x - center;
    amps[j] = prefactor * std::exp(-u * u / (4.0 * sigma * sigma)) * std::polar(1.0, k0 * x);
  }
  return normalized(WaveFunction(grid, std::move(amps)));
}

WaveFunction make_bump(const Grid& grid, double support_lo, double support_hi) {
  if (!(support_lo < support_hi)) {
    throw DomainError(fmt::format("bump support [{}, {}] is empty", support_lo, support_hi));
  }
  if (!grid.contains(support_lo) || !grid.contains(support_hi)) {
    throw DomainError(fmt::format("bump support [{}, {}] leaves the grid domain [{}, {}]", support_lo,
                                  support_hi, grid.x_min(), grid.x_max()));
  }
  const double mid = 0.5 * (support_lo + support_hi);
  const double half = 0.5 * (support_hi - support_lo);
  std::vector<Complex> amps(grid.n_points());
  bool any = false;
  for (std::size_t j = 0; j < amps.size(); ++j) {
    const double u = (grid.x(j) - mid) / half;
    if (std::abs(u) < 1.0) {
      const double value = std::exp(-1.0 / (1.0 - u * u));
      amps[j] = value;
      any = any || value > 0.0;
    }
  }
  if (!any) throw DomainError("bump support contains no grid samples");
  return normalized(WaveFunction(grid, std::move(amps)));
}

WaveFunction make_plane_wave(const Grid& grid, std::size_t mode) {
  if (mode >= grid.n_points()) throw DomainError(fmt::format("mode index {} out of range", mode));
  const double k = grid.wavenumber(mode);
  std::vector<Complex> amps(grid.n_points());
  for (std::size_t j = 0; j < amps.size(); ++j) amps[j] = std::polar(1.0, k * grid.x(j));
  return normalized(WaveFunction(grid, std::move(amps)));
}

WaveFunction make_random_band_limited(const Grid& grid, double k_cut, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> coeffs(grid.n_points());
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const double re = normal(rng);
    const double im = normal(rng);
    if (std::abs(grid.wavenumber(m)) <= k_cut) coeffs[m] = {re, im};
  }
  detail::UnitaryDft dft(grid.n_points());
  return normalized(WaveFunction(grid, dft.inverse(coeffs)));
}

WaveFunction make_random_dense(DenseSpace space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> amps(space.dim);
  for (auto& a : amps) {
    const double re = normal(rng);
    a = {re, normal(rng)};
  }
  return normalized(WaveFunction(space, std::move(amps)));
}

WaveFunction make_basis_vector(DenseSpace space, std::size_t index) {
  if (index >= space.dim) throw DomainError(fmt::format("basis index {} out of range", index));
  std::vector<Complex> amps(space.dim);
  amps[index] = 1.0;
  return WaveFunction(space, std::move(amps));
}

}  // namespace zenolab

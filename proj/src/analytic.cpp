#include "zenolab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zenolab {

std::string to_string(Analyticity a) {
  switch (a) {
    case Analyticity::EntireLike:
      return "entire-like";
    case Analyticity::FiniteRadiusLike:
      return "finite-radius-like";
    case Analyticity::SaturatedByGrid:
      return "saturated-by-grid";
    case Analyticity::ExactNilpotent:
      return "exact-nilpotent";
  }
  return "?";
}

std::vector<double> hn_log_norms(const SpectralOperator& h, const WaveFunction& psi, std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("hn_log_norms needs n_max >= 1");
  std::vector<double> out;
  out.reserve(n_max + 1);
  double current = norm(psi);
  if (!(current > 0.0)) throw std::invalid_argument("hn_log_norms needs a non-zero state");
  double log_norm = std::log(current);
  out.push_back(log_norm);
  WaveFunction v = Complex(1.0 / current, 0.0) * psi;
  for (std::size_t n = 1; n <= n_max; ++n) {
    v = h.apply(v);
    const double step = norm(v);
    if (!(step > 0.0)) {
      out.resize(n_max + 1, -std::numeric_limits<double>::infinity());
      break;
    }
    log_norm += std::log(step);
    out.push_back(log_norm);
    v *= Complex(1.0 / step, 0.0);
  }
  return out;
}

namespace {

double loglog_slope(std::span<const double> rho, std::size_t count) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t n = 0; n < count; ++n) {
    const double x = std::log(static_cast<double>(n + 1));
    const double y = std::log(rho[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double c = static_cast<double>(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace

AnalyticityReport radius_estimate(std::span<const double> log_norms, double spectral_ceiling, std::string grid_tag) {
  if (log_norms.size() < 2) throw std::invalid_argument("radius_estimate needs at least two log-norms");
  AnalyticityReport r;
  r.grid_tag = std::move(grid_tag);
  r.spectral_ceiling = spectral_ceiling;
  r.log_norms.assign(log_norms.begin(), log_norms.end());

  for (std::size_t n = 0; n + 1 < log_norms.size(); ++n) {
    if (!std::isfinite(log_norms[n + 1])) break;
    const double g = std::exp(log_norms[n + 1] - log_norms[n]);
    r.growth_rates.push_back(g);
    r.radius_estimates.push_back(static_cast<double>(n + 1) / g);
  }
  if (r.growth_rates.size() + 1 < log_norms.size()) {
    r.classification = Analyticity::ExactNilpotent;
    r.ceiling_index = r.growth_rates.size();
    r.plateau = 0.0;
    return r;
  }

  const auto& g = r.growth_rates;
  r.plateau = g.back();
  r.ceiling_index = g.size();
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (g[n] >= kCeilingFraction * spectral_ceiling) {
      r.ceiling_index = n;
      break;
    }
  }
  const bool saturated = r.ceiling_index < g.size();
  const auto [g_lo, g_hi] = std::minmax_element(g.begin(), g.end());
  const bool geometric = *g_hi <= *g_lo * (1.0 + 1e-6);

  if (r.ceiling_index >= 3) {
    r.radius_trend = loglog_slope(r.radius_estimates, r.ceiling_index);
  } else {
    // Saturated almost immediately: only a constant growth rate (an
    // eigenvector-like state) still has an unbounded radius.
    r.radius_trend = geometric ? 1.0 : -1.0;
  }

  if (r.radius_trend > kEntireSlope) {
    r.classification = Analyticity::EntireLike;
  } else if (saturated) {
    r.classification = Analyticity::SaturatedByGrid;
  } else {
    r.classification = Analyticity::FiniteRadiusLike;
  }
  return r;
}

AnalyticityReport analyze_analyticity(const SpectralOperator& h, const WaveFunction& psi, std::size_t n_max,
                                      std::string grid_tag) {
  const auto logs = hn_log_norms(h, psi, n_max);
  return radius_estimate(logs, h.spectral_radius(), std::move(grid_tag));
}

ResolutionComparison compare_resolutions(const AnalyticityReport& coarse, const AnalyticityReport& fine) {
  ResolutionComparison c;
  c.coarse_plateau_fraction = coarse.plateau / coarse.spectral_ceiling;
  c.fine_plateau_fraction = fine.plateau / fine.spectral_ceiling;
  const double ceiling_ratio = fine.spectral_ceiling / coarse.spectral_ceiling;
  c.cutoff_tracking = coarse.plateau > 0.0 ? (fine.plateau / coarse.plateau) / ceiling_ratio : 0.0;
  const auto within_two = [](double v) { return v >= 0.5 && v <= 2.0; };
  c.tracks_cutoff = ceiling_ratio > 1.0 && within_two(c.coarse_plateau_fraction) &&
                    within_two(c.fine_plateau_fraction) && within_two(c.cutoff_tracking);
  const bool both_saturated = coarse.classification == Analyticity::SaturatedByGrid &&
                              fine.classification == Analyticity::SaturatedByGrid;
  c.classification = both_saturated && c.tracks_cutoff ? Analyticity::SaturatedByGrid
                     : fine.classification == Analyticity::SaturatedByGrid ? Analyticity::FiniteRadiusLike
                                                                            : fine.classification;
  return c;
}

std::vector<SeriesErrorPoint> series_vs_spectral_curve(const SpectralOperator& h, const WaveFunction& psi, double t,
                                                       std::span<const std::size_t> n_range) {
  for (std::size_t i = 0; i < n_range.size(); ++i) {
    if (n_range[i] < 1) throw std::invalid_argument("series curve term counts start at 1");
    if (i > 0 && !(n_range[i] > n_range[i - 1])) throw std::invalid_argument("n_range must be strictly increasing");
  }
  std::vector<SeriesErrorPoint> curve;
  if (n_range.empty()) return curve;
  const WaveFunction exact = Propagator(h).evolve(psi, t);
  std::size_t next = 0;
  for_each_partial_sum(h, psi, t, n_range.back(), [&](std::size_t n, const WaveFunction& sum, bool diverged) {
    if (next < n_range.size() && n == n_range[next]) {
      curve.push_back({n, norm(sum - exact), diverged});
      ++next;
    }
  });
  return curve;
}

double peak_error(std::span<const SeriesErrorPoint> curve) {
  double peak = 0.0;
  for (const auto& p : curve) peak = std::max(peak, p.error);
  return peak;
}

}  // namespace zenolab

#pragma once

// Analytic-vector diagnostics.
//
// A vector psi is analytic for H when sum_n ||H^n psi|| t^n / n! converges for
// some t > 0; exactly then does the power series for exp(-i t H) psi converge
// to the spectral result. On a finite grid H is bounded, so every vector is
// analytic in the strict sense. What survives discretization is a resolution
// trend: for a non-analytic continuum state the growth ratio
// ||H^{n+1} psi|| / ||H^n psi|| climbs super-linearly until it hits the grid's
// spectral ceiling, and the hit moves with the cutoff as the grid is refined.
// Such states are classified saturated-by-grid, confirmed across two
// resolutions by compare_resolutions().

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zenolab/operators.hpp"

namespace zenolab {

enum class Analyticity { EntireLike, FiniteRadiusLike, SaturatedByGrid, ExactNilpotent };
std::string to_string(Analyticity a);

inline constexpr std::size_t kDefaultHnMax = 40;
/// Growth ratio at or above this fraction of ||H|| counts as saturated.
inline constexpr double kCeilingFraction = 0.5;
/// Log-log slope of rho_hat over the pre-saturation window separating the classes.
inline constexpr double kEntireSlope = 0.25;

/// log ||H^n psi|| for n = 0..n_max by normalized power iteration, so the
/// values never overflow. -infinity marks an exactly vanishing power.
std::vector<double> hn_log_norms(const SpectralOperator& h, const WaveFunction& psi, std::size_t n_max);

struct AnalyticityReport {
  std::string grid_tag;
  double spectral_ceiling = 0.0;
  std::vector<double> log_norms;
  /// ||H^{n+1} psi|| / ||H^n psi|| where defined.
  std::vector<double> growth_rates;
  /// rho_hat_n = (n + 1) ||H^n psi|| / ||H^{n+1} psi|| (ratio test on t^n ||H^n psi|| / n!).
  std::vector<double> radius_estimates;
  /// First n whose growth rate reaches kCeilingFraction * ceiling (== size when never).
  std::size_t ceiling_index = 0;
  /// Least-squares slope of log rho_hat against log(n + 1) over the pre-saturation window.
  double radius_trend = 0.0;
  /// Final growth rate: where the power sequence settles.
  double plateau = 0.0;
  Analyticity classification = Analyticity::EntireLike;
};

/// Ratio test and single-resolution classification from log-norms.
AnalyticityReport radius_estimate(std::span<const double> log_norms, double spectral_ceiling, std::string grid_tag);

/// hn_log_norms followed by radius_estimate, ceiling = ||H||.
AnalyticityReport analyze_analyticity(const SpectralOperator& h, const WaveFunction& psi,
                                      std::size_t n_max = kDefaultHnMax, std::string grid_tag = {});

struct ResolutionComparison {
  Analyticity classification = Analyticity::EntireLike;
  /// plateau / ceiling at each resolution.
  double coarse_plateau_fraction = 0.0;
  double fine_plateau_fraction = 0.0;
  /// (fine plateau / coarse plateau) / (fine ceiling / coarse ceiling).
  double cutoff_tracking = 0.0;
  bool tracks_cutoff = false;
};

/// Confirms saturated-by-grid: both resolutions saturate with plateau within
/// a factor 2 of their own ceiling, and the plateau moves with the cutoff.
/// Otherwise reports the fine-resolution classification.
ResolutionComparison compare_resolutions(const AnalyticityReport& coarse, const AnalyticityReport& fine);

struct SeriesErrorPoint {
  std::size_t n_terms = 0;
  double error = 0.0;
  bool diverged = false;
};

/// ||evolve_series(H, psi, t, n) - evolve_spectral(H, psi, t)|| for each n in
/// the strictly increasing n_range, from a single incremental pass.
std::vector<SeriesErrorPoint> series_vs_spectral_curve(const SpectralOperator& h, const WaveFunction& psi, double t,
                                                       std::span<const std::size_t> n_range);

/// Largest error over the curve.
double peak_error(std::span<const SeriesErrorPoint> curve);

}  // namespace zenolab

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "support.hpp"
#include "zenolab/analytic.hpp"

using namespace zenolab;

namespace {

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

}  // namespace

TEST_CASE("power norms of an eigenvector") {
  SUBCASE("dense diagonal operator") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = 2.5;
    m(1, 1) = -0.3;
    m(2, 2) = 1.0;
    const auto h = dense_hermitian(m);
    const auto psi = make_basis_vector(DenseSpace{3}, 1);
    const auto logs = hn_log_norms(h, psi, 30);
    for (std::size_t n = 0; n <= 30; ++n) CHECK(std::abs(logs[n] - n * std::log(0.3)) <= 1e-13 * (1.0 + n));
    const auto r = analyze_analyticity(h, psi, 30);
    CHECK(r.classification == Analyticity::EntireLike);
    for (std::size_t n = 0; n < r.radius_estimates.size(); ++n) {
      CHECK(r.radius_estimates[n] == doctest::Approx((n + 1) / 0.3).epsilon(1e-12));
    }
  }
  SUBCASE("nyquist plane wave") {
    // Round-off in other modes is amplified by (k_m / lambda)^n, so only the
    // top of the spectrum gives exact powers on a grid.
    const Grid g = zt::default_grid();
    const auto h = momentum_operator(g);
    const auto psi = make_plane_wave(g, g.n_points() / 2);
    const double lambda = g.k_max();
    const auto logs = hn_log_norms(h, psi, 20);
    for (std::size_t n = 0; n <= 20; ++n) CHECK(std::abs(logs[n] - n * std::log(lambda)) <= 1e-12 * (1.0 + n));
    CHECK(analyze_analyticity(h, psi, 20).classification == Analyticity::EntireLike);
  }
}

TEST_CASE("power norms of a gaussian are its spectral moments") {
  const Grid g = zt::coarse_grid();
  const auto h = momentum_operator(g);
  for (double sigma : {1.0, 2.0}) {
    const auto psi = make_gaussian(g, 0.0, sigma);
    const auto logs = hn_log_norms(h, psi, 12);
    for (int n = 0; n <= 12; ++n) {
      const double oracle = std::sqrt(zt::double_factorial_odd(n)) / std::pow(2.0 * sigma, n);
      CHECK(std::abs(std::exp(logs[n]) / oracle - 1.0) <= 1e-6);
    }
    const auto r = analyze_analyticity(h, psi, kDefaultHnMax);
    CHECK(r.classification == Analyticity::EntireLike);
    CHECK(r.radius_trend > kEntireSlope);
    for (std::size_t n = 0; n <= 12; ++n) {
      const double oracle = (n + 1) * 2.0 * sigma / std::sqrt(2.0 * n + 1.0);
      CHECK(r.radius_estimates[n] == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("bump power norms saturate at the grid cutoff") {
  std::vector<AnalyticityReport> reports;
  for (std::size_t n_points : {std::size_t{1024}, std::size_t{4096}}) {
    const Grid g(-40.0, 40.0, n_points);
    const auto h = momentum_operator(g);
    const auto psi = make_bump(g, 1.0, 3.0);
    const auto logs = hn_log_norms(h, psi, kDefaultHnMax);
    // Super-linear: second differences of log-norms stay positive early on.
    for (std::size_t n = 1; n + 1 < 4; ++n) CHECK(logs[n + 1] - 2.0 * logs[n] + logs[n - 1] > 0.0);
    reports.push_back(analyze_analyticity(h, psi, kDefaultHnMax, "bump-" + std::to_string(n_points)));
  }
  CHECK(reports[0].classification == Analyticity::SaturatedByGrid);
  CHECK(reports[1].classification == Analyticity::SaturatedByGrid);
  // The onset moves with resolution.
  CHECK(reports[1].ceiling_index > reports[0].ceiling_index);
  const auto cmp = compare_resolutions(reports[0], reports[1]);
  CHECK(cmp.classification == Analyticity::SaturatedByGrid);
  CHECK(cmp.tracks_cutoff);
  CHECK(cmp.coarse_plateau_fraction >= 0.5);
  CHECK(cmp.coarse_plateau_fraction <= 2.0);
  CHECK(cmp.fine_plateau_fraction >= 0.5);
  CHECK(cmp.fine_plateau_fraction <= 2.0);
  // Compared with itself the cutoff does not move, so nothing is confirmed.
  CHECK(!compare_resolutions(reports[1], reports[1]).tracks_cutoff);
}

TEST_CASE("exactly vanishing powers are nilpotent") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(1, 1) = 1.0;
  const auto h = dense_hermitian(m);
  const auto r = analyze_analyticity(h, make_basis_vector(DenseSpace{2}, 0), 10);
  CHECK(r.classification == Analyticity::ExactNilpotent);
  CHECK(std::isinf(r.log_norms.back()));
}

TEST_CASE("classification is invariant under rescaling") {
  zt::Sampler rng(31);
  auto scales = [&] {
    std::vector<Complex> cs;
    for (int rep = 0; rep < 4; ++rep) cs.push_back(std::polar(std::exp(rng.uniform(-20.0, 20.0)), rng.uniform(0.0, 6.0)));
    return cs;
  };
  SUBCASE("classification") {
    const Grid g(-40.0, 40.0, 1024);
    const auto h = momentum_operator(g);
    for (const auto& psi : {make_bump(g, 1.0, 3.0), make_gaussian(g, 0.0, 1.0), make_random_band_limited(g, 5.0, 4)}) {
      const auto base = analyze_analyticity(h, psi);
      for (const Complex c : scales()) CHECK(analyze_analyticity(h, c * psi).classification == base.classification);
    }
  }
  SUBCASE("growth rates") {
    // Away from the round-off floor (k_max ~ 8) the ratios cancel to rounding.
    const Grid g = zt::coarse_grid();
    const auto h = momentum_operator(g);
    for (const auto& psi : {make_gaussian(g, 0.0, 1.0), make_random_band_limited(g, 2.0, 4)}) {
      const auto base = analyze_analyticity(h, psi, 16);
      for (const Complex c : scales()) {
        const auto scaled = analyze_analyticity(h, c * psi, 16);
        CHECK(scaled.classification == base.classification);
        REQUIRE(scaled.growth_rates.size() == base.growth_rates.size());
        for (std::size_t n = 0; n < base.growth_rates.size(); ++n) {
          CHECK(scaled.growth_rates[n] == doctest::Approx(base.growth_rates[n]).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("series versus spectral curves") {
  SUBCASE("t = 0 is exact for every n") {
    const Grid g = zt::default_grid();
    const auto curve = series_vs_spectral_curve(momentum_operator(g), make_bump(g, 1.0, 3.0), 0.0, range(1, 50));
    for (const auto& p : curve) CHECK(p.error == 0.0);
  }
  SUBCASE("gaussian converges from n = 25") {
    const Grid g = zt::coarse_grid();
    const auto curve = series_vs_spectral_curve(momentum_operator(g), make_gaussian(g, 0.0, 1.0), 1.0, range(1, 60));
    for (const auto& p : curve) {
      if (p.n_terms >= 25) CHECK(p.error < 1e-10);
      CHECK(!p.diverged);
    }
  }
  SUBCASE("bump peak error grows with resolution") {
    std::vector<double> peaks;
    for (std::size_t n_points : {std::size_t{1024}, std::size_t{4096}}) {
      const Grid g(-40.0, 40.0, n_points);
      peaks.push_back(peak_error(series_vs_spectral_curve(momentum_operator(g), make_bump(g, 1.0, 3.0), 1.0, range(1, 300))));
    }
    CHECK(peaks[1] > peaks[0]);
    CHECK(peaks[0] > 1.0);
  }
  SUBCASE("curve points equal direct series evaluations") {
    const Grid g(-40.0, 40.0, 1024);
    const auto h = momentum_operator(g);
    const auto psi = make_bump(g, 1.0, 3.0);
    const std::vector<std::size_t> ns{1, 3, 10, 40};
    const auto curve = series_vs_spectral_curve(h, psi, 0.7, ns);
    const auto exact = Propagator(h).evolve(psi, 0.7);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      CHECK(curve[i].n_terms == ns[i]);
      CHECK(curve[i].error == norm(evolve_series(h, psi, 0.7, ns[i]).state - exact));
    }
    const std::vector<std::size_t> bad{3, 3};
    CHECK_THROWS(series_vs_spectral_curve(h, psi, 0.7, bad));
    const std::vector<std::size_t> zero{0};
    CHECK_THROWS(series_vs_spectral_curve(h, psi, 0.7, zero));
  }
}

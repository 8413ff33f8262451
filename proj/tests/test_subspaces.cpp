#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "support.hpp"
#include "zenolab/errors.hpp"
#include "zenolab/subspaces.hpp"

using namespace zenolab;

namespace {

Propagator rabi(double omega) {
  Eigen::MatrixXcd m(2, 2);
  m << 0.0, omega, omega, 0.0;
  return Propagator(dense_hermitian(m));
}

ProjectorPair rabi_zones() {
  const DenseSpace s{2};
  return dense_pair(s, {make_basis_vector(s, 0)}, {make_basis_vector(s, 1)});
}

/// Leakage of the core-projected gaussian(c, 1), c < 0, after translation by
/// t, as a Riemann sum on the grid: the x = 0 sample carries a full weight dx,
/// which adds half a sample of density over the continuum integral.
double projected_leakage(double c, double t, double dx) {
  const double z = zt::normal_cdf_series(-c);
  const double continuum = (z - zt::normal_cdf_series(-c - t)) / z;
  const double u = -t - c;
  const double edge_density = std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi) / z;
  return continuum + 0.5 * dx * edge_density;
}

}  // namespace

TEST_CASE("halfline projectors on supported states") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const auto psi = make_bump(g, -6.0, -1.0);
  CHECK(max_abs_difference(zones.core.apply(psi), psi) == 0.0);
  CHECK(norm(zones.wave.apply(psi)) == 0.0);
  CHECK_THROWS_AS(halfline_pair(Grid(1.0, 5.0, 64)), DomainError);
  CHECK_THROWS_AS(halfline_pair(Grid(-5.0, -1.0, 64)), DomainError);
}

TEST_CASE("centered gaussian splits its mass evenly") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const auto psi = make_gaussian(g, 0.0, 1.0);
  // x = 0 is a sample that belongs to the wave zone.
  const double edge = std::norm(zt::gaussian_value(0.0, 0.0, 1.0)) * g.dx();
  CHECK(std::abs(norm_squared(zones.wave.apply(psi)) - 0.5) <= edge);
  CHECK(std::abs(norm_squared(zones.wave.apply(psi)) - 0.5 - 0.5 * edge) <= 1e-12);
}

TEST_CASE("projector algebra on random states") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const DenseSpace d{6};
  // A dense pair from a random unitary's columns.
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(6, 6);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  const Eigen::MatrixXcd q = qr.householderQ();
  std::vector<WaveFunction> core_basis;
  std::vector<WaveFunction> wave_basis;
  for (int c = 0; c < 6; ++c) {
    std::vector<Complex> col(q.col(c).data(), q.col(c).data() + 6);
    (c < 2 ? core_basis : wave_basis).emplace_back(d, std::move(col));
  }
  const auto dense = dense_pair(d, core_basis, wave_basis);

  zt::Sampler rng(77);
  double idem = 0.0;
  double herm = 0.0;
  double pyth = 0.0;
  double dense_comp = 0.0;
  bool complement_exact = true;
  for (int i = 0; i < 100; ++i) {
    const auto psi = make_random_band_limited(g, rng.uniform(1.0, 160.0), rng.seed());
    const auto phi = make_random_band_limited(g, rng.uniform(1.0, 160.0), rng.seed());
    for (const auto* p : {&zones.core, &zones.wave}) {
      const auto pp = p->apply(psi);
      idem = std::max(idem, max_abs_difference(p->apply(pp), pp));
      herm = std::max(herm, std::abs(inner_product(phi, pp) - inner_product(p->apply(phi), psi)));
    }
    const auto c = zones.core.apply(psi);
    const auto w = zones.wave.apply(psi);
    const auto sum = c + w;
    for (std::size_t j = 0; j < psi.size(); ++j) complement_exact = complement_exact && sum[j] == psi[j];
    pyth = std::max(pyth, std::abs(norm_squared(psi) - norm_squared(c) - norm_squared(w)));

    const auto xd = make_random_dense(d, rng.seed());
    const auto yd = make_random_dense(d, rng.seed());
    for (const auto* p : {&dense.core, &dense.wave}) {
      const auto pp = p->apply(xd);
      idem = std::max(idem, max_abs_difference(p->apply(pp), pp));
      herm = std::max(herm, std::abs(inner_product(yd, pp) - inner_product(p->apply(yd), xd)));
    }
    const auto cd = dense.core.apply(xd);
    const auto wd = dense.wave.apply(xd);
    dense_comp = std::max(dense_comp, max_abs_difference(cd + wd, xd));
    pyth = std::max(pyth, std::abs(norm_squared(xd) - norm_squared(cd) - norm_squared(wd)));
  }
  CHECK(idem <= 1e-13);
  CHECK(herm <= 1e-12);
  CHECK(complement_exact);
  CHECK(dense_comp <= 1e-13);
  CHECK(pyth <= 1e-12);
}

TEST_CASE("span projector rejects non-orthonormal lists") {
  const DenseSpace d{2};
  const WaveFunction v(d, {Complex(1.0, 0.0), Complex(1.0, 0.0)});
  CHECK_THROWS_AS(SubspaceProjector::span_of(d, {v}), ValidationError);
  CHECK_THROWS_AS(dense_pair(d, {make_basis_vector(d, 0)}, {make_basis_vector(d, 0)}), ValidationError);
}

TEST_CASE("leakage under translation") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const Propagator u(momentum_operator(g));
  const auto e = normalized(zones.core.apply(make_gaussian(g, -3.0, 1.0)));
  CHECK(leakage(zones, u, e, 0.0) <= 1e-12);
  CHECK(std::abs(leakage(zones, u, e, 3.0) - projected_leakage(-3.0, 3.0, g.dx())) <= 1e-4);
  CHECK(std::abs(leakage(zones, u, e, 6.0) - projected_leakage(-3.0, 6.0, g.dx())) <= 1e-4);
  // The unprojected oracle Phi(3) within 1e-4 at t = 6.
  CHECK(std::abs(leakage(zones, u, e, 6.0) - 0.998650) <= 1e-4);
  // A state with weight on the wave side is refused.
  try {
    (void)leakage(zones, u, make_gaussian(g, -3.0, 1.0), 1.0);
    CHECK(false);
  } catch (const PreconditionError& err) {
    CHECK(std::string(err.what()).find("mass outside") != std::string::npos);
  }
}

TEST_CASE("condition (I)") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const Propagator u(momentum_operator(g));
  SUBCASE("translation with margins holds") {
    std::vector<WaveFunction> ws;
    for (double c : {8.0, 10.0, 12.0}) ws.push_back(normalized(zones.wave.apply(make_gaussian(g, c, 1.0))));
    std::vector<double> ts;
    for (int k = 1; k <= 12; ++k) ts.push_back(0.5 * k);
    const auto r = check_condition_I(zones, u, ts, ws);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.max_residual <= 1e-8);
    CHECK(r.samples.size() == ts.size() * ws.size());
  }
  SUBCASE("rabi fails with sin^2") {
    const auto rz = rabi_zones();
    const std::vector<double> ts{0.3, 1.0, 2.0};
    const std::vector<WaveFunction> ws{make_basis_vector(DenseSpace{2}, 1)};
    const auto r = check_condition_I(rz, rabi(1.0), ts, ws);
    CHECK(r.verdict == Verdict::Fails);
    for (const auto& s : r.samples) CHECK(std::abs(s.residual - std::pow(std::sin(s.t), 2)) <= 1e-14);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->t == doctest::Approx(2.0));
  }
  SUBCASE("empty time list is vacuous") {
    const std::vector<double> ts;
    const std::vector<WaveFunction> ws{normalized(zones.wave.apply(make_gaussian(g, 10.0, 1.0)))};
    const auto r = check_condition_I(zones, u, ts, ws);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(!r.witness.has_value());
  }
  SUBCASE("non-positive times and wrong-zone states are refused") {
    const std::vector<double> ts{-1.0};
    const std::vector<WaveFunction> ws{normalized(zones.wave.apply(make_gaussian(g, 10.0, 1.0)))};
    CHECK_THROWS(check_condition_I(zones, u, ts, ws));
    const std::vector<double> ok{1.0};
    const std::vector<WaveFunction> bad{make_gaussian(g, 0.0, 1.0)};
    CHECK_THROWS_AS(check_condition_I(zones, u, ok, bad), PreconditionError);
  }
}

TEST_CASE("condition (II)") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const Propagator u(momentum_operator(g));
  const std::vector<WaveFunction> cs{normalized(zones.core.apply(make_gaussian(g, -3.0, 1.0)))};
  SUBCASE("translation is falsified") {
    const std::vector<double> ts{6.0};
    const auto r = check_condition_II(zones, u, ts, cs);
    CHECK(r.verdict == Verdict::Falsified);
    CHECK(r.max_residual == doctest::Approx(0.9987).epsilon(2e-4));
  }
  SUBCASE("t = 0 cannot falsify") {
    const std::vector<double> ts{0.0};
    const auto r = check_condition_II(zones, u, ts, cs);
    CHECK(r.verdict == Verdict::NotFalsified);
    CHECK(r.max_residual == 0.0);
  }
  SUBCASE("rabi is falsified with sin^2") {
    const auto rz = rabi_zones();
    const std::vector<double> ts{0.4, 1.1};
    const std::vector<WaveFunction> e{make_basis_vector(DenseSpace{2}, 0)};
    const auto r = check_condition_II(rz, rabi(1.0), ts, e);
    CHECK(r.verdict == Verdict::Falsified);
    for (const auto& s : r.samples) CHECK(std::abs(s.residual - std::pow(std::sin(s.t), 2)) <= 1e-14);
  }
}

TEST_CASE("condition (I-A)") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const Propagator u(momentum_operator(g));
  const std::vector<WaveFunction> ws{normalized(zones.wave.apply(make_gaussian(g, 3.0, 1.0)))};
  SUBCASE("backward translation fails") {
    const std::vector<double> ts{-6.0};
    const auto r = check_condition_IA(zones, u, ts, ws);
    CHECK(r.verdict == Verdict::Fails);
    CHECK(std::abs(r.max_backward_residual - (1.0 - 2.0 * zt::normal_cdf_series(-3.0)) / zt::normal_cdf_series(3.0)) <= 1e-4);
  }
  SUBCASE("forward translation holds") {
    const std::vector<double> ts{6.0};
    const auto r = check_condition_IA(zones, u, ts, ws);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.max_residual <= 1e-8);
  }
  SUBCASE("t = 0 has no residual") {
    const std::vector<double> ts{0.0};
    CHECK(check_condition_IA(zones, u, ts, ws).max_residual == 0.0);
    const auto rz = rabi_zones();
    const std::vector<WaveFunction> w2{make_basis_vector(DenseSpace{2}, 1)};
    CHECK(check_condition_IA(rz, rabi(1.0), ts, w2).max_residual == 0.0);
  }
}

TEST_CASE("conditions (III-A) and (IV-A)") {
  const Grid g = zt::default_grid();
  const auto zones = halfline_pair(g);
  const Propagator u(momentum_operator(g));
  const std::vector<WaveFunction> ws{normalized(zones.wave.apply(make_gaussian(g, 10.0, 1.0)))};
  CHECK(check_condition_IIIA(zones, u.generator(), ws).verdict == Verdict::Holds);
  const std::vector<double> ts{1.0, 5.0, 20.0};
  const auto iva = check_condition_IVA(zones, u, ts, ws);
  CHECK(iva.verdict == Verdict::Holds);
  // Rabi: H maps (0,1) straight into the core zone.
  const auto rz = rabi_zones();
  const std::vector<WaveFunction> w2{make_basis_vector(DenseSpace{2}, 1)};
  const auto r3 = check_condition_IIIA(rz, rabi(1.0).generator(), w2);
  CHECK(r3.verdict == Verdict::Fails);
  CHECK(r3.max_residual == doctest::Approx(1.0));
  const std::vector<double> t2{0.5, 1.0};
  CHECK(check_condition_IVA(rz, rabi(1.0), t2, w2).verdict == Verdict::Fails);
}

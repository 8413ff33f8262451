// Acceptance checks: one PASS/FAIL line per criterion.

#include <fmt/format.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "zenolab/cli.hpp"
#include "zenolab/numerics.hpp"
#include "zenolab/scenarios.hpp"

using namespace zenolab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    detail += (detail.empty() ? "" : "; ") + std::string(ok ? "" : "FAILED ") + what;
  }
};

fs::path scratch_dir() {
  static const fs::path dir = fs::temp_directory_path() / ("zenolab-acceptance-" + std::to_string(::getpid()));
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  return cli::run_cli(args, out, err);
}

Outcome criterion_counterexample() {
  Outcome o;
  const fs::path dir = scratch_dir() / "c1";
  const int status = run_cli({"run", "counterexample", "--out", dir.string()});
  o.require(status == 0, fmt::format("exit status {}", status));
  const auto b = scenario_counterexample();
  const double res = b.flag("condition_I_max_residual").value;
  const double leak = b.flag("condition_II_leakage_at_drift").value;
  const double back = b.flag("condition_IA_backward_mass").value;
  const double phi3 = normal_cdf(3.0);
  o.require(res <= 1e-8, fmt::format("(I) max residual {:.3e} <= 1e-8", res));
  o.require(leak >= 0.99 && std::abs(leak - phi3) <= 1e-3, fmt::format("(II) leakage {:.6f} vs Phi(3) {:.6f}", leak, phi3));
  o.require(back >= 0.99, fmt::format("(I-A) backward mass {:.6f} >= 0.99", back));
  return o;
}

Outcome criterion_hm_invariance() {
  Outcome o;
  double worst_spectral = 0.0;
  double worst_exact = 0.0;
  double worst_oracle = 0.0;
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{13}}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      ScenarioParams p;
      p.n_measurements = n;
      p.seed = seed;
      const auto b = scenario_hm_invariance(p);
      for (const auto& f : b.flags) {
        if (f.name.rfind("spectral_", 0) == 0 && f.name.ends_with("_abs_ds") && f.name.find("leaky") == std::string::npos) {
          worst_spectral = std::max(worst_spectral, f.value);
        }
        if (f.name.rfind("exact_", 0) == 0 && f.name.ends_with("_abs_ds")) worst_exact = std::max(worst_exact, f.value);
      }
      worst_oracle = std::max(worst_oracle, b.flag("spectral_s_free_oracle_error").value);
    }
  }
  o.require(worst_spectral <= 1e-8, fmt::format("spectral max |ds| {:.3e} <= 1e-8", worst_spectral));
  o.require(worst_exact <= 1e-12, fmt::format("exact-shift max |ds| {:.3e} <= 1e-12", worst_exact));
  o.require(worst_oracle <= 1e-6, fmt::format("s_free vs exp(-t^2/4 sigma^2) {:.3e} <= 1e-6", worst_oracle));
  return o;
}

Outcome criterion_rabi() {
  Outcome o;
  const auto b = scenario_rabi_control(ScenarioParams{});
  const double s1 = b.survivals.front().report.s_measured;
  o.require(std::abs(s1 - 0.25) <= 1e-10, fmt::format("N=1 s_measured {:.12f} vs 0.25", s1));
  const double dev = b.flag("zeno_slope_deviation").value;
  o.require(dev <= 0.15, fmt::format("slope deviation from -1 is {:.4f} <= 0.15", dev));
  return o;
}

Outcome criterion_propagator() {
  Outcome o;
  const Grid g(-40.0, 40.0, 4096);
  const Propagator u(momentum_operator(g));
  const Propagator shift = Propagator::exact_translation(g);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> times(-10.0, 10.0);
  std::uniform_real_distribution<double> cut(1.0, 150.0);
  std::uniform_int_distribution<long long> steps(-2000, 2000);
  double unitarity = 0.0;
  double group = 0.0;
  double identity = 0.0;
  double agreement = 0.0;
  const int samples = 100;
  for (int i = 0; i < samples; ++i) {
    const auto psi = make_random_band_limited(g, cut(rng), rng());
    const double t = times(rng);
    const double s = times(rng);
    const auto ut = u.evolve(psi, t);
    unitarity = std::max(unitarity, std::abs(norm(ut) - norm(psi)));
    group = std::max(group, max_abs_difference(u.evolve(ut, s), u.evolve(psi, t + s)));
    identity = std::max(identity, max_abs_difference(u.evolve(psi, 0.0), psi));
    const double ts = static_cast<double>(steps(rng)) * g.dx();
    agreement = std::max(agreement, max_abs_difference(u.evolve(psi, ts), shift.evolve(psi, ts)));
  }
  o.require(unitarity <= 1e-12, fmt::format("{} samples: unitarity {:.2e}", samples, unitarity));
  o.require(group <= 1e-11, fmt::format("group law {:.2e}", group));
  o.require(identity <= 1e-14, fmt::format("U(0) {:.2e}", identity));
  o.require(agreement <= 1e-10, fmt::format("spectral vs exact shift {:.2e}", agreement));
  return o;
}

Outcome criterion_stone() {
  Outcome o;
  const Grid g(-40.0, 40.0, 4096);
  const auto h = momentum_operator(g);
  std::vector<double> ts;
  for (double t = 0.1; ts.size() < 14; t *= 0.5) ts.push_back(t);
  const auto res = stone_residual(h, make_gaussian(g, 0.0, 1.0), ts);
  // The last five halvings span a factor 16, which covers the final decade.
  const std::size_t n = ts.size();
  const double slope = (std::log(res[n - 1]) - std::log(res[n - 5])) / (std::log(ts[n - 1]) - std::log(ts[n - 5]));
  o.require(std::abs(slope - 1.0) <= 0.1, fmt::format("gaussian log-log slope {:.4f}", slope));
  const auto psi = make_plane_wave(g, 40);
  const double lambda = g.wavenumber(40);
  const auto eres = stone_residual(h, psi, ts);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // (e^z - 1 - z) / z summed term by term; the closed form cancels for small z.
    const Complex z(0.0, -lambda * ts[i]);
    Complex f = 0.0;
    Complex term = 1.0;
    for (int k = 1; k < 40; ++k) {
      term *= z / static_cast<double>(k + 1);
      f += term;
    }
    const double expected = std::abs(lambda) * norm(psi) * std::abs(f);
    worst = std::max(worst, std::abs(eres[i] - expected));
  }
  o.require(worst <= 1e-12, fmt::format("eigenvector vs scalar formula {:.2e}", worst));
  return o;
}

Outcome criterion_series() {
  Outcome o;
  const auto b = scenario_series_validity();
  const double g40 = b.flag("gaussian_series_error_from_40").value;
  o.require(g40 < 1e-10, fmt::format("gaussian error for n >= 40 is {:.2e}", g40));
  const double ratio = b.flag("bump_peak_error_ratio_fine_over_coarse").value;
  o.require(ratio > 1.0, fmt::format("bump peak error 4096/1024 ratio {:.3e}", ratio));
  const bool saturated = b.flag("bump_saturated_by_grid").passed;
  const double cf = b.flag("bump_coarse_plateau_over_kmax").value;
  const double ff = b.flag("bump_fine_plateau_over_kmax").value;
  o.require(saturated && cf >= 0.5 && cf <= 2.0 && ff >= 0.5 && ff <= 2.0,
            fmt::format("saturated-by-grid with plateau/k_max {:.3f} and {:.3f}", cf, ff));
  return o;
}

Outcome criterion_projectors() {
  Outcome o;
  const Grid g(-40.0, 40.0, 4096);
  const auto zones = halfline_pair(g);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> cut(1.0, 160.0);
  double idem = 0.0;
  double herm = 0.0;
  double pyth = 0.0;
  bool exact = true;
  const int samples = 100;
  for (int i = 0; i < samples; ++i) {
    const auto psi = make_random_band_limited(g, cut(rng), rng());
    const auto phi = make_random_band_limited(g, cut(rng), rng());
    for (const auto* p : {&zones.core, &zones.wave}) {
      const auto pp = p->apply(psi);
      idem = std::max(idem, max_abs_difference(p->apply(pp), pp));
      herm = std::max(herm, std::abs(inner_product(phi, pp) - inner_product(p->apply(phi), psi)));
    }
    const auto c = zones.core.apply(psi);
    const auto w = zones.wave.apply(psi);
    const auto sum = c + w;
    for (std::size_t j = 0; j < psi.size(); ++j) exact = exact && sum[j] == psi[j];
    pyth = std::max(pyth, std::abs(norm_squared(psi) - norm_squared(c) - norm_squared(w)));
  }
  o.require(idem <= 1e-13, fmt::format("{} samples: idempotence {:.2e}", samples, idem));
  o.require(herm <= 1e-12, fmt::format("hermiticity {:.2e}", herm));
  o.require(exact, "complementarity exact");
  o.require(pyth <= 1e-12, fmt::format("pythagoras {:.2e}", pyth));
  return o;
}

Outcome criterion_determinism() {
  Outcome o;
  for (const auto& s : scenario_registry()) {
    const fs::path a = scratch_dir() / "c8a" / s.name;
    const fs::path b = scratch_dir() / "c8b" / s.name;
    const int sa = run_cli({"run", s.name, "--format", "bundle", "--out", a.string()});
    const int sb = run_cli({"run", s.name, "--format", "bundle", "--out", b.string()});
    const std::string ja = slurp(a / "bundle.json");
    const std::string jb = slurp(b / "bundle.json");
    o.require(sa == 0 && sb == 0 && !ja.empty() && ja == jb, fmt::format("{} identical ({} bytes)", s.name, ja.size()));
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "counterexample verdict pair", 5.0, criterion_counterexample},
      {2, "measured survival equals free survival", 10.0, criterion_hm_invariance},
      {3, "Rabi positive control", 2.0, criterion_rabi},
      {4, "propagator algebra", 60.0, criterion_propagator},
      {5, "Stone residual", 60.0, criterion_stone},
      {6, "series validity", 60.0, criterion_series},
      {7, "projector algebra", 60.0, criterion_projectors},
      {8, "determinism", 60.0, criterion_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = fmt::format("exception: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    if (!in_time) o.detail += fmt::format("; FAILED runtime budget {:.0f} s", c.budget_s);
    const bool ok = o.passed && in_time;
    failures += ok ? 0 : 1;
    std::cout << fmt::format("{} criterion {}: {} ({}) [{:.2f} s]\n", ok ? "PASS" : "FAIL", c.id, c.title, o.detail, secs);
  }
  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

#include "zenolab/subspaces.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zenolab/errors.hpp"

namespace zenolab {

SubspaceProjector::SubspaceProjector(Space space, double threshold, Side side, std::vector<WaveFunction> basis)
    : space_(std::move(space)), threshold_(threshold), side_(side), basis_(std::move(basis)) {}

SubspaceProjector SubspaceProjector::position_indicator(const Grid& grid, double threshold, Side side) {
  return SubspaceProjector(grid, threshold, side, {});
}

SubspaceProjector SubspaceProjector::span_of(Space space, std::vector<WaveFunction> orthonormal_basis) {
  if (orthonormal_basis.empty()) throw DomainError("span projector needs at least one basis vector");
  for (std::size_t a = 0; a < orthonormal_basis.size(); ++a) {
    if (!(orthonormal_basis[a].space() == space)) throw ShapeError("basis vector lives on a different space");
    for (std::size_t b = a; b < orthonormal_basis.size(); ++b) {
      const Complex g = inner_product(orthonormal_basis[a], orthonormal_basis[b]);
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(g - expected) > 1e-10) {
        throw ValidationError(fmt::format("basis is not orthonormal: <b{}|b{}> = {}{:+}i", a, b, g.real(), g.imag()));
      }
    }
  }
  return SubspaceProjector(std::move(space), 0.0, Side::Below, std::move(orthonormal_basis));
}

WaveFunction SubspaceProjector::apply(const WaveFunction& psi) const {
  if (!(psi.space() == space_)) throw ShapeError("projector and state live on different spaces");
  if (is_indicator()) {
    const Grid& grid = space_.grid();
    std::vector<Complex> out(psi.amplitudes().begin(), psi.amplitudes().end());
    for (std::size_t j = 0; j < out.size(); ++j) {
      const bool below = grid.x(j) < threshold_;
      if (below != (side_ == Side::Below)) out[j] = 0.0;
    }
    return WaveFunction(space_, std::move(out));
  }
  WaveFunction out = WaveFunction::zeros(space_);
  for (const auto& b : basis_) out += inner_product(b, psi) * b;
  return out;
}

WaveFunction SubspaceProjector::reject(const WaveFunction& psi) const { return psi - apply(psi); }

ProjectorPair halfline_pair(const Grid& grid) {
  // Sample 0 is the leftmost, sample n-1 the rightmost.
  if (!(grid.x(0) < 0.0) || !(grid.x(grid.n_points() - 1) >= 0.0)) {
    throw DomainError(fmt::format("grid [{}, {}) does not straddle x = 0", grid.x_min(), grid.x_max()));
  }
  return {SubspaceProjector::position_indicator(grid, 0.0, Side::Below),
          SubspaceProjector::position_indicator(grid, 0.0, Side::AtOrAbove)};
}

ProjectorPair dense_pair(DenseSpace space, std::vector<WaveFunction> core_basis, std::vector<WaveFunction> wave_basis) {
  if (core_basis.size() + wave_basis.size() != space.dim) {
    throw ValidationError("core and wave bases must together span the dense space");
  }
  for (const auto& c : core_basis) {
    for (const auto& w : wave_basis) {
      if (std::abs(inner_product(c, w)) > 1e-10) throw ValidationError("core and wave bases are not orthogonal");
    }
  }
  return {SubspaceProjector::span_of(space, std::move(core_basis)),
          SubspaceProjector::span_of(space, std::move(wave_basis))};
}

void require_in_zone(const SubspaceProjector& other_zone, const WaveFunction& psi, const char* zone_name) {
  const double n2 = norm_squared(psi);
  if (std::abs(n2 - 1.0) > kNormalizationTolerance) {
    throw PreconditionError(fmt::format("state is not normalized (||psi||^2 = {:.17g})", n2));
  }
  const double outside = norm_squared(other_zone.apply(psi));
  if (outside > kZoneMembershipTolerance) {
    throw PreconditionError(fmt::format("state is not in the {} zone (mass outside = {:.6e})", zone_name, outside));
  }
}

double leakage(const ProjectorPair& zones, const Propagator& u, const WaveFunction& e, double t) {
  require_in_zone(zones.wave, e, "core");
  return norm_squared(zones.wave.apply(u.evolve(e, t)));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "HOLDS";
    case Verdict::Fails:
      return "FAILS";
    case Verdict::Falsified:
      return "FALSIFIED";
    case Verdict::NotFalsified:
      return "NOT FALSIFIED";
  }
  return "?";
}

namespace {

void require_zone_relative(const SubspaceProjector& other_zone, std::span<const WaveFunction> states,
                           const char* zone_name) {
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double n2 = norm_squared(states[i]);
    const double outside = norm_squared(other_zone.apply(states[i]));
    if (!(n2 > 0.0) || outside > kZoneMembershipTolerance * n2) {
      throw PreconditionError(
          fmt::format("trial state {} is not in the {} zone (relative mass outside = {:.6e})", i, zone_name,
                      n2 > 0.0 ? outside / n2 : 1.0));
    }
  }
}

// Residual ||measure(U(t) psi)||^2 / ||psi||^2 over a fixed (t, state) order.
template <class Measure>
ConditionReport sweep(std::string name, const Propagator& u, std::span<const double> t_samples,
                      std::span<const WaveFunction> states, double tolerance, Measure&& measure) {
  ConditionReport report;
  report.condition = std::move(name);
  report.tolerance = tolerance;
  report.samples.reserve(t_samples.size() * states.size());
  for (double t : t_samples) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double residual = norm_squared(measure(u.evolve(states[i], t))) / norm_squared(states[i]);
      ConditionSample sample{t, i, residual};
      report.samples.push_back(sample);
      if (!report.witness || residual > report.max_residual) {
        report.max_residual = residual;
        report.witness = sample;
      }
      if (t > 0.0) report.max_forward_residual = std::max(report.max_forward_residual, residual);
      if (t < 0.0) report.max_backward_residual = std::max(report.max_backward_residual, residual);
    }
  }
  return report;
}

}  // namespace

ConditionReport check_condition_I(const ProjectorPair& zones, const Propagator& u, std::span<const double> t_samples,
                                  std::span<const WaveFunction> wave_states, double tolerance) {
  for (double t : t_samples) {
    if (!(t > 0.0)) throw std::invalid_argument("condition (I) samples forward times t > 0 only");
  }
  require_zone_relative(zones.core, wave_states, "wave");
  auto report = sweep("I", u, t_samples, wave_states, tolerance,
                      [&](const WaveFunction& v) { return zones.core.apply(v); });
  report.verdict = report.max_residual <= tolerance ? Verdict::Holds : Verdict::Fails;
  // Vacuous sweeps carry no witness.
  if (report.verdict == Verdict::Holds && report.samples.empty()) report.witness.reset();
  return report;
}

ConditionReport check_condition_II(const ProjectorPair& zones, const Propagator& u,
                                   std::span<const double> t_samples, std::span<const WaveFunction> core_states,
                                   double tolerance) {
  for (double t : t_samples) {
    if (!(t >= 0.0)) throw std::invalid_argument("condition (II) samples times t >= 0 only");
  }
  require_zone_relative(zones.wave, core_states, "core");
  auto report = sweep("II", u, t_samples, core_states, tolerance,
                      [&](const WaveFunction& v) { return zones.wave.apply(v); });
  report.verdict = report.max_residual > tolerance ? Verdict::Falsified : Verdict::NotFalsified;
  return report;
}

ConditionReport check_condition_IA(const ProjectorPair& zones, const Propagator& u,
                                   std::span<const double> t_samples, std::span<const WaveFunction> wave_states,
                                   double tolerance) {
  require_zone_relative(zones.core, wave_states, "wave");
  auto report = sweep("I-A", u, t_samples, wave_states, tolerance,
                      [&](const WaveFunction& v) { return zones.core.apply(v); });
  report.verdict = report.max_residual <= tolerance ? Verdict::Holds : Verdict::Fails;
  return report;
}

ConditionReport check_condition_IIIA(const ProjectorPair& zones, const SpectralOperator& h,
                                     std::span<const WaveFunction> wave_states, double tolerance) {
  require_zone_relative(zones.core, wave_states, "wave");
  ConditionReport report;
  report.condition = "III-A";
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < wave_states.size(); ++i) {
    const double residual = norm_squared(zones.core.apply(h.apply(wave_states[i]))) / norm_squared(wave_states[i]);
    ConditionSample sample{0.0, i, residual};
    report.samples.push_back(sample);
    if (!report.witness || residual > report.max_residual) {
      report.max_residual = residual;
      report.witness = sample;
    }
  }
  report.verdict = report.max_residual <= tolerance ? Verdict::Holds : Verdict::Fails;
  return report;
}

ConditionReport check_condition_IVA(const ProjectorPair& zones, const Propagator& u,
                                    std::span<const double> t_samples, std::span<const WaveFunction> wave_states,
                                    double tolerance) {
  for (double t : t_samples) {
    if (!(t > 0.0)) throw std::invalid_argument("condition (IV-A) samples t > 0 (evolved with U(t)^dagger)");
  }
  require_zone_relative(zones.core, wave_states, "wave");
  ConditionReport report;
  report.condition = "IV-A";
  report.tolerance = tolerance;
  bool all_pass = !t_samples.empty() || wave_states.empty();
  for (std::size_t i = 0; i < wave_states.size(); ++i) {
    std::optional<ConditionSample> best;
    for (double t : t_samples) {
      const WaveFunction back = u.evolve_adjoint(wave_states[i], t);
      const double residual = norm_squared(zones.core.apply(back)) / norm_squared(wave_states[i]);
      report.samples.push_back({t, i, residual});
      if (!best || residual < best->residual) best = ConditionSample{t, i, residual};
    }
    if (!best) continue;
    report.max_backward_residual = std::max(report.max_backward_residual, best->residual);
    if (!report.witness || best->residual > report.max_residual) {
      report.max_residual = best->residual;
      report.witness = best;
    }
    all_pass = all_pass && best->residual <= tolerance;
  }
  report.verdict = all_pass ? Verdict::Holds : Verdict::Fails;
  return report;
}

}  // namespace zenolab

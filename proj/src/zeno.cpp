#include "zenolab/zeno.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "zenolab/errors.hpp"

namespace zenolab {

MeasurementSchedule::MeasurementSchedule(double final_time, std::vector<double> measurement_times)
    : final_time_(final_time), times_(std::move(measurement_times)) {
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) {
    throw DomainError(fmt::format("final time must be finite and non-negative, got {}", final_time));
  }
  double previous = 0.0;
  for (double tj : times_) {
    if (!(tj > previous) || !(tj < final_time)) {
      throw DomainError(fmt::format("measurement times must satisfy 0 < t_1 < ... < t_N < {}; offending value {}",
                                    final_time, tj));
    }
    previous = tj;
  }
}

MeasurementSchedule MeasurementSchedule::equally_spaced(double final_time, std::size_t n_measurements) {
  std::vector<double> times(n_measurements);
  const double step = final_time / static_cast<double>(n_measurements + 1);
  for (std::size_t k = 0; k < n_measurements; ++k) times[k] = step * static_cast<double>(k + 1);
  return MeasurementSchedule(final_time, std::move(times));
}

namespace {

// |<e|chi>|^2 / ||e||^4: equals |<e|chi>|^2 for normalized e and is exactly 1
// when chi is e itself.
double overlap_probability(const WaveFunction& e, const WaveFunction& chi) {
  const double n2 = norm_squared(e);
  return std::norm(inner_product(e, chi)) / (n2 * n2);
}

void require_core(const SubspaceProjector& core, const WaveFunction& e) {
  const double n2 = norm_squared(e);
  if (std::abs(n2 - 1.0) > kNormalizationTolerance) {
    throw PreconditionError(fmt::format("initial state is not normalized (||e||^2 = {:.17g})", n2));
  }
  const double outside = norm_squared(core.reject(e));
  if (outside > kZoneMembershipTolerance) {
    throw PreconditionError(fmt::format("initial state is not core-zone (||P_W e||^2 = {:.6e})", outside));
  }
}

}  // namespace

double survival_free(const Propagator& u, const WaveFunction& e, double t) {
  return overlap_probability(e, u.evolve(e, t));
}

SurvivalReport survival_measured(const Propagator& u, const SubspaceProjector& core, const WaveFunction& e,
                                 const MeasurementSchedule& schedule) {
  require_core(core, e);
  const double t = schedule.final_time();
  SurvivalReport report;
  report.final_time = t;
  report.n_measurements = schedule.size();

  const WaveFunction free_state = u.evolve(e, t);
  report.s_free = overlap_probability(e, free_state);
  report.leakage_free = norm_squared(core.reject(free_state));

  WaveFunction chi = e;
  double previous = 0.0;
  for (double tk : schedule.times()) {
    chi = core.apply(u.evolve(chi, tk - previous));
    report.retained_norms.push_back(norm_squared(chi));
    previous = tk;
  }
  chi = u.evolve(chi, t - previous);
  report.s_measured = overlap_probability(e, chi);
  return report;
}

double invariance_bound(const Propagator& u, const SubspaceProjector& core, const WaveFunction& e,
                        const MeasurementSchedule& schedule) {
  require_core(core, e);
  const double t = schedule.final_time();
  double amplitude_bound = 0.0;
  WaveFunction chi = e;
  double previous = 0.0;
  for (double tk : schedule.times()) {
    const WaveFunction before = u.evolve(chi, tk - previous);
    const WaveFunction rejected = core.reject(before);
    amplitude_bound += norm(core.apply(u.evolve(rejected, t - tk)));
    chi = core.apply(before);
    previous = tk;
  }
  return 2.0 * amplitude_bound;
}

std::vector<std::pair<std::size_t, double>> zeno_scaling(const Propagator& u, const SubspaceProjector& core,
                                                         const WaveFunction& e, double t,
                                                         std::span<const std::size_t> n_list) {
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (i > 0 && !(n_list[i] > n_list[i - 1])) throw std::invalid_argument("N list must be strictly increasing");
    const auto report = survival_measured(u, core, e, MeasurementSchedule::equally_spaced(t, n_list[i]));
    out.emplace_back(n_list[i], report.s_measured);
  }
  return out;
}

}  // namespace zenolab

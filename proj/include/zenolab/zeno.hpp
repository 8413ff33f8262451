#pragma once

// Survival probability with and without intermediate projective
// measurements of the core-zone projector.
//
// "Survival with measurements" is the selective joint probability
//   s_measured = |<e| U(t - t_N) P_C U(t_N - t_{N-1}) P_C ... P_C U(t_1) |e>|^2,
// i.e. every measurement finds the system in the core zone and the final
// state overlaps |e>. The non-selective (density-matrix) protocol is not
// modelled.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "zenolab/operators.hpp"
#include "zenolab/subspaces.hpp"

namespace zenolab {

/// Measurement instants 0 < t_1 < ... < t_N < t. N = 0 is free evolution.
class MeasurementSchedule {
 public:
  MeasurementSchedule(double final_time, std::vector<double> measurement_times);
  /// N instants splitting (0, t) into N + 1 equal intervals.
  static MeasurementSchedule equally_spaced(double final_time, std::size_t n_measurements);

  double final_time() const { return final_time_; }
  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }

 private:
  double final_time_;
  std::vector<double> times_;
};

struct SurvivalReport {
  double final_time = 0.0;
  std::size_t n_measurements = 0;
  double s_free = 0.0;
  double s_measured = 0.0;
  /// ||P_W U(t) e||^2 without measurements.
  double leakage_free = 0.0;
  /// ||chi_k||^2 after the k-th projection, k = 1..N.
  std::vector<double> retained_norms;
};

/// |<e|U(t)|e>|^2 for normalized e.
double survival_free(const Propagator& u, const WaveFunction& e, double t);

/// Selective measured chain. e must be normalized and core-zone
/// (||e - P_C e||^2 <= 1e-10); violations throw PreconditionError.
SurvivalReport survival_measured(const Propagator& u, const SubspaceProjector& core, const WaveFunction& e,
                                 const MeasurementSchedule& schedule);

/// Bound B with |s_measured - s_free| <= B derived from the orthogonality
/// argument behind the invariance: B = 2 sum_k ||P_C U(t - t_k) W_k||, where
/// W_k is the part of the chain rejected by the k-th measurement. B vanishes
/// whenever the wave zone is forward-invariant for the visited states.
double invariance_bound(const Propagator& u, const SubspaceProjector& core, const WaveFunction& e,
                        const MeasurementSchedule& schedule);

/// s_measured for equally spaced schedules of each N (N_list increasing).
std::vector<std::pair<std::size_t, double>> zeno_scaling(const Propagator& u, const SubspaceProjector& core,
                                                         const WaveFunction& e, double t,
                                                         std::span<const std::size_t> n_list);

}  // namespace zenolab

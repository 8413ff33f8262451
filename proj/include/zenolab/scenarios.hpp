#pragma once

// Named experiments binding the state space, propagators, projectors,
// measurement chain and analyticity diagnostics into self-contained verdict
// bundles. Every pass flag records the number it was decided on.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zenolab/analytic.hpp"
#include "zenolab/errors.hpp"
#include "zenolab/subspaces.hpp"
#include "zenolab/zeno.hpp"

namespace zenolab {

/// Raised for scenario parameters that violate margins or ranges.
class ScenarioConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Overrides for a scenario; unset fields take the scenario's defaults.
struct ScenarioParams {
  std::optional<std::size_t> grid_points;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<double> sigma;
  std::optional<double> center;
  std::optional<double> time;
  std::optional<std::size_t> n_measurements;
  std::optional<double> omega;
  std::optional<double> tolerance_invariance;
  std::optional<double> tolerance_falsify;
  std::optional<std::uint64_t> seed;
};

enum class Relation { LessEqual, GreaterEqual, Less, Greater, Equal };
std::string to_string(Relation r);

struct PassFlag {
  std::string name;
  double value = 0.0;
  Relation relation = Relation::LessEqual;
  double threshold = 0.0;
  bool passed = false;
};

PassFlag make_flag(std::string name, double value, Relation relation, double threshold);

using Cell = std::variant<double, long long, std::string>;

struct CurveTable {
  /// File stem, e.g. "survival".
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

template <class Report>
struct Labelled {
  std::string label;
  Report report;
};

struct VerdictBundle {
  std::string scenario;
  /// Ordered (key, value) pairs: grid, seeds, tolerances, derived settings.
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<Labelled<ConditionReport>> conditions;
  std::vector<Labelled<SurvivalReport>> survivals;
  std::vector<Labelled<AnalyticityReport>> analyticity;
  std::vector<PassFlag> flags;
  std::vector<CurveTable> curves;
  /// Human-readable headline lines for the summary.
  std::vector<std::string> headlines;

  bool all_passed() const;
  const PassFlag& flag(const std::string& name) const;
};

/// Translation counterexample: (I) holds, (II) is falsified, (I-A) fails backward.
VerdictBundle scenario_counterexample(const ScenarioParams& params = {});

/// Survival with N measurements equals free survival for a core-zone state.
VerdictBundle scenario_hm_invariance(std::size_t n_measurements);
VerdictBundle scenario_hm_invariance(const ScenarioParams& params);

inline constexpr std::size_t kRabiScalingCounts[] = {8, 16, 32, 64, 128};

/// Two-level Rabi control where measurements do freeze the evolution.
VerdictBundle scenario_rabi_control(double omega, std::span<const std::size_t> n_list);
VerdictBundle scenario_rabi_control(const ScenarioParams& params);

/// Series-versus-spectral propagation for an entire-like Gaussian, a
/// compactly supported bump at two resolutions, and an eigenvector.
VerdictBundle scenario_series_validity(const ScenarioParams& params = {});

struct ScenarioInfo {
  std::string name;
  std::string summary;
  /// Parameter keys (CLI long-flag names) this scenario accepts.
  std::vector<std::string> parameters;
  std::function<VerdictBundle(const ScenarioParams&)> run;
};

const std::vector<ScenarioInfo>& scenario_registry();
/// nullptr when unknown.
const ScenarioInfo* find_scenario(const std::string& name);

}  // namespace zenolab

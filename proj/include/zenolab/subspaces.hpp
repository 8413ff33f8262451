#pragma once

// Orthogonal projectors onto the core zone H_C and wave zone H_W, and
// sampling-based checkers for the invariance conditions relating them to a
// propagator.
//
// The checkers evaluate finitely many (t, state) pairs. A FALSIFIED or FAILS
// verdict is backed by a concrete witness; a HOLDS verdict only means every
// sampled residual stayed below the tolerance.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zenolab/operators.hpp"
#include "zenolab/statespace.hpp"

namespace zenolab {

enum class Side { Below, AtOrAbove };

class SubspaceProjector {
 public:
  /// Keeps grid samples with x < threshold (Below) or x >= threshold (AtOrAbove).
  static SubspaceProjector position_indicator(const Grid& grid, double threshold, Side side);
  /// Projector onto the span of an orthonormal list (checked to 1e-10).
  static SubspaceProjector span_of(Space space, std::vector<WaveFunction> orthonormal_basis);

  const Space& space() const { return space_; }
  bool is_indicator() const { return basis_.empty(); }
  double threshold() const { return threshold_; }
  Side side() const { return side_; }

  WaveFunction apply(const WaveFunction& psi) const;
  /// psi - P psi.
  WaveFunction reject(const WaveFunction& psi) const;

 private:
  SubspaceProjector(Space space, double threshold, Side side, std::vector<WaveFunction> basis);

  Space space_;
  double threshold_ = 0.0;
  Side side_ = Side::Below;
  std::vector<WaveFunction> basis_;
};

struct ProjectorPair {
  SubspaceProjector core;
  SubspaceProjector wave;
};

/// Core zone = samples with x < 0, wave zone = samples with x >= 0. The x = 0
/// sample, when present, belongs to the wave zone. Throws DomainError when the
/// grid does not have samples on both sides of 0.
ProjectorPair halfline_pair(const Grid& grid);

/// Pair on a dense space from complementary orthonormal lists.
ProjectorPair dense_pair(DenseSpace space, std::vector<WaveFunction> core_basis,
                         std::vector<WaveFunction> wave_basis);

inline constexpr double kZoneMembershipTolerance = 1e-10;
inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kDefaultInvarianceTolerance = 1e-8;
inline constexpr double kDefaultFalsifyTolerance = 1e-6;

/// Throws PreconditionError unless psi is normalized and ||P_other psi||^2 <= 1e-10.
void require_in_zone(const SubspaceProjector& other_zone, const WaveFunction& psi, const char* zone_name);

/// ||P_W U(t) e||^2 for a normalized core-zone state e.
double leakage(const ProjectorPair& zones, const Propagator& u, const WaveFunction& e, double t);

enum class Verdict { Holds, Fails, Falsified, NotFalsified };
std::string to_string(Verdict v);

struct ConditionSample {
  double t = 0.0;
  std::size_t state_index = 0;
  double residual = 0.0;
};

struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::Holds;
  double tolerance = 0.0;
  double max_residual = 0.0;
  /// Largest residual over t > 0 and over t < 0 samples (0 when absent).
  double max_forward_residual = 0.0;
  double max_backward_residual = 0.0;
  std::optional<ConditionSample> witness;
  /// Row-major over (t, state) in the order supplied.
  std::vector<ConditionSample> samples;
};

/// (I): ||P_C U(t) W||^2 / ||W||^2 for t > 0 and wave-zone W.
ConditionReport check_condition_I(const ProjectorPair& zones, const Propagator& u, std::span<const double> t_samples,
                                  std::span<const WaveFunction> wave_states,
                                  double tolerance = kDefaultInvarianceTolerance);

/// (II): ||P_W U(t) C||^2 / ||C||^2 for t >= 0 and core-zone C. FALSIFIED on
/// any residual above tolerance.
ConditionReport check_condition_II(const ProjectorPair& zones, const Propagator& u,
                                   std::span<const double> t_samples, std::span<const WaveFunction> core_states,
                                   double tolerance = kDefaultFalsifyTolerance);

/// (I-A): same residual as (I) with t of either sign.
ConditionReport check_condition_IA(const ProjectorPair& zones, const Propagator& u,
                                   std::span<const double> t_samples, std::span<const WaveFunction> wave_states,
                                   double tolerance = kDefaultInvarianceTolerance);

/// Grid analogue of (III-A): ||P_C H W||^2 / ||W||^2 for wave-zone W. On a
/// grid every vector lies in the domain of H, so this only probes whether H
/// maps the sampled, margin-respecting wave states back into H_W; t is
/// recorded as 0.
ConditionReport check_condition_IIIA(const ProjectorPair& zones, const SpectralOperator& h,
                                     std::span<const WaveFunction> wave_states,
                                     double tolerance = kDefaultInvarianceTolerance);

/// (IV-A): for each wave state, some t > 0 in the list with
/// ||P_C U(t)^dagger W||^2 <= tolerance. The reported residual per state is
/// the smallest over t; HOLDS when every state has a passing t.
ConditionReport check_condition_IVA(const ProjectorPair& zones, const Propagator& u,
                                    std::span<const double> t_samples, std::span<const WaveFunction> wave_states,
                                    double tolerance = kDefaultInvarianceTolerance);

}  // namespace zenolab

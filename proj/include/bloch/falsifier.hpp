#pragma once

#include <cstdint>
#include <vector>

#include "bloch/channels.hpp"
#include "bloch/metrics.hpp"
#include "bloch/qstate.hpp"

namespace bloch {

struct SearchConfig {
  MetricModel metric = MetricModel::brody_hughston();
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  /// Each spherical differential is drawn uniformly from [-scale, scale].
  double differential_scale = 1e-5;
  /// Force u = 0, so every sampled channel is unital.
  bool unital_only = false;
  /// 0 means configured_threads().
  unsigned workers = 0;
  /// A trial counts as a violation when post > pre * (1 + margin). The margin
  /// sits above the ~1e-11 rounding noise of the spherical-chart differences.
  double relative_margin = 1e-9;

  void validate() const;
};

/// One monotonicity violation: d(Phi rho1, Phi rho2) > d(rho1, rho2) with
/// rho2 = rho1 + differential in the spherical chart and Phi the
/// trigonometric channel (u, v).
struct ViolationRecord {
  Spherical state;
  SphericalDifferential differential;
  double u = 0.0;
  double v = 0.0;
  double pre_distance = 0.0;
  double post_distance = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

struct CaseReport {
  Spherical state;
  Spherical perturbed;
  Spherical image;
  Spherical perturbed_image;
  double pre_distance = 0.0;
  double post_distance = 0.0;
  double ratio = 0.0;
  bool violation = false;
};

/// Distances before and after the channel for one (state, differential,
/// channel) triple. The post distance is the line element at the image of the
/// state along the chart difference of the two images (phi difference wrapped
/// into (-pi, pi]).
CaseReport evaluate_case(const MetricModel& metric, const Spherical& state, const SphericalDifferential& d, double u,
                         double v);

/// Recomputes a stored record from its raw coordinates.
CaseReport verify_case(const MetricModel& metric, const ViolationRecord& record);

/// The reference counterexample: state (0.646675, 2.51509, 5.89259), channel
/// u = 2.43564, v = 0.0289153 and differentials of magnitude
/// (4.17588e-6, 8.44724e-6, 7.82807e-6). The stored differential carries the
/// sign under which the reference image coordinates are reproduced.
ViolationRecord reference_counterexample();
/// Reference image coordinates of the state and of its perturbed partner.
Spherical reference_image();
Spherical reference_perturbed_image();

struct SearchResult {
  std::uint64_t trials = 0;
  std::vector<ViolationRecord> violations;
};

/// Randomised search. Trial i draws from its own counter-derived stream, so
/// the result depends only on (seed, trials, config), not on the worker count;
/// records come back in trial order.
SearchResult search(const SearchConfig& cfg);

/// SplitMix64 stream keyed by (seed, trial).
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial);
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

}  // namespace bloch

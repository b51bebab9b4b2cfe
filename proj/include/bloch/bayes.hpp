#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bloch/metrics.hpp"
#include "bloch/quadrature.hpp"

namespace bloch {

/// Jeffreys prior of a metric: sqrt(radial) * normal * r^2 * sin(theta),
/// normalised over the ball. Metrics whose volume diverges at the boundary
/// (maximal monotone, Bach-Guiasu) raise DomainError or AccuracyError.
BallDensity prior(const MetricModel& metric, const QuadratureSpec& spec = {});

/// Short prior names: BH, B, MC, GKS, MBH (also ~BH). Throws UnknownIdError.
MetricModel prior_metric(std::string_view name);
std::string prior_name(const MetricModel& metric);
BallDensity prior(std::string_view name, const QuadratureSpec& spec = {});

enum class Polyhedron { kOctahedron, kCube, kIcosahedron, kDodecahedron };

/// Measurement axes (unit vectors, pairwise distinct up to sign).
class AxisSet {
 public:
  /// OCTAHEDRON-3, CUBE-4, ICOSAHEDRON-6, DODECAHEDRON-10.
  static AxisSet platonic(Polyhedron solid);
  /// Accepts the labels above or the short forms oct, cube, icos, dode.
  static AxisSet parse(std::string_view label);
  /// Validates unit norm (within 1e-12) and distinctness up to sign.
  static AxisSet custom(std::string label, std::vector<Eigen::Vector3d> axes);

  const std::string& label() const { return label_; }
  const std::vector<Eigen::Vector3d>& axes() const { return axes_; }
  std::size_t size() const { return axes_.size(); }
  /// Short form used in posterior names: oct, cube, icos, dode or the label.
  std::string short_name() const;

  AxisSet rotated(const Eigen::Matrix3d& rotation) const;

 private:
  AxisSet(std::string label, std::vector<Eigen::Vector3d> axes) : label_(std::move(label)), axes_(std::move(axes)) {}

  std::string label_;
  std::vector<Eigen::Vector3d> axes_;
};

/// Every axis measured `pairs_per_axis` times in pairs, each pair giving one
/// "up" and one "down".
struct LikelihoodSpec {
  AxisSet axes = AxisSet::platonic(Polyhedron::kOctahedron);
  int pairs_per_axis = 1;

  /// e.g. oct3, oct6, cube4, icos6, dode10: short axis name and the total
  /// number of measurement pairs.
  static LikelihoodSpec parse(std::string_view name);
  std::string name() const;
  /// Superscript used for posteriors: "3", "6", "9" on the octahedron,
  /// "4/cube", "6/icos", "10/dode" otherwise.
  std::string superscript() const;
};

/// ln of prod over axes of (1 - (n.x)^2)^k. For k = 1 each factor carries the
/// pair probability 1/2, (1 - (n.x)^2)/2; for k > 1 the constants are dropped.
double log_likelihood(const LikelihoodSpec& spec, const Eigen::Vector3d& x);

/// normalize(prior x likelihood), labelled P_<prior>^(<superscript>).
BallDensity posterior(const BallDensity& prior, const LikelihoodSpec& likelihood, const QuadratureSpec& spec = {});

struct ClarkeRung {
  std::string likelihood;
  double p_posterior_to_q = 0.0;  // D(P_p || q)
  double q_posterior_to_p = 0.0;  // D(P_q || p)
};

struct ClarkeReport {
  std::string p;
  std::string q;
  double p_to_q = 0.0;  // D(p || q)
  double q_to_p = 0.0;  // D(q || p)
  std::vector<ClarkeRung> rungs;
  /// At the first rung, updating p moves it closer to q while updating q
  /// moves it further from p.
  bool p_more_noninformative = false;
  /// First rung index at which D(P_p || q) >= D(p || q).
  std::optional<std::size_t> breakdown_rung;
};

ClarkeReport clarke_compare(const BallDensity& p, const BallDensity& q, std::span<const LikelihoodSpec> ladder,
                            const QuadratureSpec& spec = {});

/// Resolves a density name: a prior name, optionally followed by
/// ":posterior:<likelihood>", e.g. "B:posterior:cube4", "MC:posterior:oct9".
BallDensity named_density(std::string_view name, const QuadratureSpec& spec = {});

}  // namespace bloch

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bloch/metrics.hpp"
#include "bloch/qstate.hpp"

namespace bloch {

/// Tensor-product rule over the ball in (r, theta, phi).
///
/// Radially, r = sin(psi) absorbs (1 - r^2)^(-1/2) endpoint factors, and psi
/// is further graded towards the boundary, psi = pi/2 (1 - (1 - s)^q), so
/// logarithmic endpoint singularities (ln^2 t in the Morozova-Chentsov volume)
/// are integrated at high order. Gauss-Legendre in s and theta; the periodic
/// azimuth uses the equal-weight rule, exact for trigonometric polynomials.
struct QuadratureSpec {
  int radial_nodes = 96;
  int polar_nodes = 96;
  int azimuthal_nodes = 96;
  bool sine_substitution = true;
  int boundary_grading = 3;
  /// Absolute agreement required between a rule and its doubled refinement.
  double tolerance = 1e-7;

  void validate() const;
  QuadratureSpec doubled() const;
  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

/// A quadrature node (or any evaluation point) with 1 - r carried exactly.
struct BallPoint {
  double r = 0.0;
  double one_minus_r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
  double sin_theta = 0.0;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();

  RadialPoint radial() const { return {r, one_minus_r}; }
  static BallPoint at(double r, double theta, double phi);
  static BallPoint at(RadialPoint radial, double theta, double phi);
};

using PointFunction = std::function<double(const BallPoint&)>;

/// Node sets for one QuadratureSpec.
class BallGrid {
 public:
  struct RadialNode {
    double r;
    double one_minus_r;
    double weight;
  };
  struct AngleNode {
    double angle;
    double weight;
  };

  explicit BallGrid(const QuadratureSpec& spec);

  const std::vector<RadialNode>& radial() const { return radial_; }
  const std::vector<AngleNode>& polar() const { return polar_; }
  const std::vector<AngleNode>& azimuthal() const { return azimuthal_; }

  /// Single-rule estimate. Each radial shell is summed independently with
  /// compensated summation and the shells are combined in index order, so the
  /// result does not depend on the worker count.
  double integrate(const PointFunction& f, unsigned workers = 0) const;
  /// Integral over (theta, phi) at a fixed radius.
  double integrate_sphere(const PointFunction& f, RadialPoint radius) const;

 private:
  std::vector<RadialNode> radial_;
  std::vector<AngleNode> polar_;
  std::vector<AngleNode> azimuthal_;
};

/// Integral of f over the ball (f includes the r^2 sin(theta) Jacobian).
/// Accepts the doubled rule once it agrees with the previous one to within
/// spec.tolerance; throws AccuracyError after two failed doublings.
double integrate_ball(const PointFunction& f, const QuadratureSpec& spec = {});

/// Same, for f(r, theta, phi) = g(r) sin(theta): 4 pi times the radial
/// integral of f(r, pi/2, 0). Only the radial rule is doubled.
double integrate_ball_isotropic(const PointFunction& f, const QuadratureSpec& spec = {});

/// A nonnegative density on the ball in the spherical chart (including the
/// r^2 sin(theta) factor), stored as an unnormalised log-density plus its
/// log-normaliser. Priors and posteriors are both BallDensity.
class BallDensity {
 public:
  BallDensity(std::string label, PointFunction log_unnormalized, double log_normalizer, bool isotropic = false);

  const std::string& label() const { return label_; }
  double log_normalizer() const { return log_normalizer_; }
  const PointFunction& log_unnormalized() const { return log_unnormalized_; }
  /// True when the density has the form g(r) sin(theta).
  bool isotropic() const { return isotropic_; }

  /// Normalised log-density (may be -inf where the density vanishes).
  double log_value(const BallPoint& p) const { return log_unnormalized_(p) + log_normalizer_; }
  double value(const BallPoint& p) const;

 private:
  std::string label_;
  PointFunction log_unnormalized_;
  double log_normalizer_;
  bool isotropic_;
};

/// Throws DomainError for zero or non-finite mass.
BallDensity normalize(std::string label, PointFunction log_unnormalized, const QuadratureSpec& spec = {},
                      bool isotropic = false);

/// D(p||q) = integral of p ln(p/q), with ln(p/q) formed from log-densities.
/// Uses the radial fast path when both densities are isotropic.
double relative_entropy(const BallDensity& p, const BallDensity& q, const QuadratureSpec& spec = {});

struct MarginalSample {
  double r = 0.0;
  double density = 0.0;
};

/// m(r) = integral of p over theta and phi, at each radius of r_grid.
std::vector<MarginalSample> radial_marginal(const BallDensity& p, std::span<const double> r_grid,
                                            const QuadratureSpec& spec = {});
double marginal_value(const BallDensity& p, double r, const QuadratureSpec& spec = {});

/// Radii in (r_lo, r_hi) where dm/dr changes sign, located by bracketing on
/// `brackets` equal sub-intervals and refining with TOMS 748.
std::vector<double> marginal_critical_points(const BallDensity& p, double r_lo, double r_hi,
                                             std::size_t brackets = 64, const QuadratureSpec& spec = {});

/// Constant term of the asymptotic minimax redundancy
///   (d/2) ln(n / (2 pi e)) + ln(volume) = (d/2) ln n + constant.
double redundancy_constant(int d, double fisher_volume);

}  // namespace bloch

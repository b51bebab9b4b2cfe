#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bloch/qstate.hpp"

namespace bloch {

/// Operator monotone functions f with f(t) = t f(1/t), each normalised so
/// that f(1) = 1.
enum class MonotoneFamily {
  kBures,             // (1 + t)/2, the minimal monotone metric
  kMaximal,           // 2t/(1 + t), right logarithmic derivative
  kIdentric,          // e^-1 t^(t/(t-1)), exponential/identric mean
  kMorozovaChentsov,  // 2(1 - t)^2 / ((1 + t) ln^2 t)
  kImputedBH,         // imputed_f(t)/12: the f whose normal component is 12x BH's
};

double monotone_f(MonotoneFamily family, double t);
std::string_view family_name(MonotoneFamily family);

enum class MetricKind { kBrodyHughston, kMonotone, kBachGuiasu, kModifiedBrodyHughston };

/// A radius carried together with 1 - r so quadrature nodes that crowd the
/// boundary keep full relative precision in 1 - r.
struct RadialPoint {
  double r = 0.0;
  double one_minus_r = 1.0;

  static RadialPoint at(double r) { return {r, 1.0 - r}; }
};

/// Coefficients of ds^2 = radial dr^2 + normal dn^2 with dn^2 = r^2 dOmega^2.
struct MetricCoefficients {
  double radial = 0.0;
  double normal = 0.0;
};

// Below this radius the Brody-Hughston coefficients use their Taylor series.
inline constexpr double kSeriesRadius = 1e-4;

/// A rotationally invariant metric on the open Bloch ball, diagonal in the
/// spherical chart. Immutable.
class MetricModel {
 public:
  static MetricModel brody_hughston();
  static MetricModel monotone(MonotoneFamily family);
  static MetricModel bach_guiasu();
  /// BH with the radial coefficient replaced by 1/(12 (1 - r^2)).
  static MetricModel modified_brody_hughston();

  /// Accepts BH, MODIFIED_BH, BACH_GUIASU (or BG) and MONOTONE:<family> with
  /// family one of BURES, MAXIMAL, IDENTRIC, MC (or MOROZOVA_CHENTSOV),
  /// IMPUTED_BH. Throws UnknownIdError.
  static MetricModel parse(std::string_view id);

  MetricKind kind() const { return kind_; }
  MonotoneFamily family() const { return family_; }
  std::string id() const;

  /// Valid for r in [0, 1); the origin gives the r -> 0 limits.
  MetricCoefficients coefficients(double r) const;
  MetricCoefficients coefficients(RadialPoint p) const;

  /// ln(sqrt(radial) * normal * r^2): the radial part of the volume element
  /// in the spherical chart (the remaining factor is sin(theta)).
  double log_radial_volume(RadialPoint p) const;

  friend bool operator==(const MetricModel&, const MetricModel&) = default;

 private:
  MetricModel(MetricKind kind, MonotoneFamily family) : kind_(kind), family_(family) {}

  MetricKind kind_;
  MonotoneFamily family_;
};

/// Every metric the registry knows about, in a fixed order.
std::vector<MetricModel> registered_metrics();

/// Z(lambda1, lambda2) = (2pi)^3 (e^-lambda2 - e^-lambda1)/(lambda1 - lambda2).
double generating_function(double lambda1, double lambda2);
/// Z as a function of the Bloch vector: 16 pi^3 sinh(r/2)/(sqrt(e) r).
double generating_function(const QubitState& s);
double log_generating_function(const Eigen::Vector3d& x);

inline constexpr double kDefaultHessianStep = 1e-4;

/// Central-difference Hessian of ln Z in Cartesian coordinates, symmetrised.
/// Requires r + 3 step < 1 and step in [1e-6, 1e-3].
Eigen::Matrix3d fisher_from_generating(const QubitState& s, double step = kDefaultHessianStep);

/// radial * xhat xhat^T + normal * (I - xhat xhat^T).
Eigen::Matrix3d metric_tensor_cartesian(const MetricModel& m, const QubitState& s);
/// J^T diag(radial, normal r^2, normal r^2 sin^2 theta) J with J the Jacobian
/// of (r, theta, phi) with respect to x. Undefined on the polar axis.
Eigen::Matrix3d metric_tensor_via_jacobian(const MetricModel& m, const QubitState& s);

/// First-order line element evaluated at the (unperturbed) point s.
double line_element_distance(const MetricModel& m, const QubitState& s,
                             const SphericalDifferential& ds);

/// f imputed to the BH normal component by matching it to 1/((1+r) f(t)),
/// r = (1 - t)/(1 + t). f(0) ~ 6.09929, f(1) = 12.
double imputed_f(double t);
/// First-order expansion of imputed_f about t = 0.
double imputed_f_series(double t);
double imputed_f_series_intercept();
double imputed_f_series_slope();

/// Scale applied to metric b before comparison in a dominance report.
enum class DominanceNormalization {
  kAsDefined,     // both metrics as registered (monotone ones Fisher-adjusted)
  kQuarterScaled, // b divided by 4
  kOriginMatched, // b rescaled so its radial coefficient agrees with a's at r -> 0
};

struct DominanceSample {
  double r = 0.0;
  double radial_difference = 0.0;  // radial_a - s radial_b
  double normal_difference = 0.0;  // normal_a - s normal_b
  double min_eigenvalue = 0.0;     // of G_a - s G_b in Cartesian coordinates
};

struct DominanceRegion {
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::size_t negative = 0;
  std::size_t samples = 0;
  double min_eigenvalue = 0.0;
};

struct DominanceReport {
  std::string a;
  std::string b;
  DominanceNormalization normalization = DominanceNormalization::kAsDefined;
  double scale = 1.0;
  std::vector<DominanceSample> samples;
  std::vector<DominanceRegion> regions;
  /// All samples have min eigenvalue >= -tolerance.
  bool a_dominates = false;
  /// radial_b(r) > radial_a(r) at every sample with r > 0.
  bool b_radial_exceeds_a = false;
};

/// Evaluates tensor(a) - scale * tensor(b) along the radii in r_grid (tensors
/// are rotation invariant, so one direction per radius suffices; the sample is
/// taken off the polar axis). Reports, does not assert.
DominanceReport dominance_report(const MetricModel& a, const MetricModel& b,
                                 std::span<const double> r_grid,
                                 DominanceNormalization normalization = DominanceNormalization::kAsDefined,
                                 std::size_t region_count = 4, double tolerance = 1e-12);

}  // namespace bloch

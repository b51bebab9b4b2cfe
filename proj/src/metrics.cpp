#include "bloch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

void check_open_ball(double r) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw DomainError("metric evaluated off the open Bloch ball (r = " + std::to_string(r) + ")");
  }
}

// ln t for t = (1 - r)/(1 + r), accurate at both ends of [0, 1).
double log_t(RadialPoint p) {
  if (p.r < 0.5) return std::log1p(-p.r) - std::log1p(p.r);
  return std::log(p.one_minus_r) - std::log1p(p.r);
}

// Brody-Hughston coefficients, from the Hessian of ln(sinh(r/2)/r):
//   radial = (4 - r^2 csch^2(r/2)) / (4 r^2) = 1/12 - r^2/240 + r^4/6048 - ...
//   normal = (r coth(r/2) - 2) / (2 r^2)     = 1/12 - r^2/720 + r^4/30240 - ...
double bh_radial(double r) {
  if (r < kSeriesRadius) {
    const double r2 = r * r;
    return 1.0 / 12.0 - r2 / 240.0 + r2 * r2 / 6048.0;
  }
  const double s = std::sinh(0.5 * r);
  return (4.0 - (r * r) / (s * s)) / (4.0 * r * r);
}

double bh_normal(double r) {
  if (r < kSeriesRadius) {
    const double r2 = r * r;
    return 1.0 / 12.0 - r2 / 720.0 + r2 * r2 / 30240.0;
  }
  return (r / std::tanh(0.5 * r) - 2.0) / (2.0 * r * r);
}

// 1/((1 + r) f(t)) in closed form for each family, so that e.g. the Bures
// normal coefficient is exactly 1.
double monotone_normal(MonotoneFamily family, RadialPoint p) {
  const double r = p.r;
  switch (family) {
    case MonotoneFamily::kBures:
      return 1.0;
    case MonotoneFamily::kMaximal:
      return 1.0 / (p.one_minus_r * (1.0 + r));
    case MonotoneFamily::kIdentric: {
      if (r == 0.0) return 1.0;
      const double exponent = p.one_minus_r / (2.0 * r) * log_t(p);
      return kE / (1.0 + r) * std::exp(exponent);
    }
    case MonotoneFamily::kMorozovaChentsov: {
      if (r == 0.0) return 1.0;
      const double half = log_t(p) / (2.0 * r);
      return half * half;
    }
    case MonotoneFamily::kImputedBH:
      return 12.0 * bh_normal(r);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double monotone_f(MonotoneFamily family, double t) {
  if (!(t >= 0.0)) throw DomainError("monotone f needs t >= 0");
  switch (family) {
    case MonotoneFamily::kBures:
      return 0.5 * (1.0 + t);
    case MonotoneFamily::kMaximal:
      return 2.0 * t / (1.0 + t);
    case MonotoneFamily::kIdentric:
      if (t == 0.0) return 1.0 / kE;
      if (t == 1.0) return 1.0;
      return std::exp(-1.0 + t * std::log(t) / (t - 1.0));
    case MonotoneFamily::kMorozovaChentsov: {
      if (t == 0.0) return 0.0;
      if (t == 1.0) return 1.0;
      const double q = (1.0 - t) / std::log(t);
      return 2.0 * q * q / (1.0 + t);
    }
    case MonotoneFamily::kImputedBH:
      return imputed_f(t) / 12.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string_view family_name(MonotoneFamily family) {
  switch (family) {
    case MonotoneFamily::kBures: return "BURES";
    case MonotoneFamily::kMaximal: return "MAXIMAL";
    case MonotoneFamily::kIdentric: return "IDENTRIC";
    case MonotoneFamily::kMorozovaChentsov: return "MC";
    case MonotoneFamily::kImputedBH: return "IMPUTED_BH";
  }
  return "?";
}

MetricModel MetricModel::brody_hughston() {
  return {MetricKind::kBrodyHughston, MonotoneFamily::kBures};
}

MetricModel MetricModel::monotone(MonotoneFamily family) { return {MetricKind::kMonotone, family}; }

MetricModel MetricModel::bach_guiasu() { return {MetricKind::kBachGuiasu, MonotoneFamily::kBures}; }

MetricModel MetricModel::modified_brody_hughston() {
  return {MetricKind::kModifiedBrodyHughston, MonotoneFamily::kBures};
}

MetricModel MetricModel::parse(std::string_view id) {
  if (id == "BH") return brody_hughston();
  if (id == "MODIFIED_BH" || id == "~BH") return modified_brody_hughston();
  if (id == "BACH_GUIASU" || id == "BG") return bach_guiasu();
  constexpr std::string_view prefix = "MONOTONE:";
  if (id.starts_with(prefix)) {
    const auto fam = id.substr(prefix.size());
    if (fam == "BURES") return monotone(MonotoneFamily::kBures);
    if (fam == "MAXIMAL") return monotone(MonotoneFamily::kMaximal);
    if (fam == "IDENTRIC") return monotone(MonotoneFamily::kIdentric);
    if (fam == "MC" || fam == "MOROZOVA_CHENTSOV") return monotone(MonotoneFamily::kMorozovaChentsov);
    if (fam == "IMPUTED_BH") return monotone(MonotoneFamily::kImputedBH);
  }
  throw UnknownIdError("unknown metric id: " + std::string(id));
}

std::string MetricModel::id() const {
  switch (kind_) {
    case MetricKind::kBrodyHughston: return "BH";
    case MetricKind::kMonotone: return "MONOTONE:" + std::string(family_name(family_));
    case MetricKind::kBachGuiasu: return "BACH_GUIASU";
    case MetricKind::kModifiedBrodyHughston: return "MODIFIED_BH";
  }
  return "?";
}

MetricCoefficients MetricModel::coefficients(double r) const {
  check_open_ball(r);
  return coefficients(RadialPoint::at(r));
}

MetricCoefficients MetricModel::coefficients(RadialPoint p) const {
  // r itself may round to 1 on nodes crowding the boundary; 1 - r decides.
  if (!(p.r >= 0.0 && p.one_minus_r > 0.0 && p.one_minus_r <= 1.0)) {
    throw DomainError("metric evaluated off the open Bloch ball (1 - r = " + std::to_string(p.one_minus_r) + ")");
  }
  const double r = p.r;
  const double one_minus_r2 = p.one_minus_r * (1.0 + r);
  switch (kind_) {
    case MetricKind::kBrodyHughston:
      return {bh_radial(r), bh_normal(r)};
    case MetricKind::kMonotone:
      return {1.0 / one_minus_r2, monotone_normal(family_, p)};
    case MetricKind::kBachGuiasu:
      return {2.0 * (1.0 + r * r) / (one_minus_r2 * one_minus_r2), 2.0 / one_minus_r2};
    case MetricKind::kModifiedBrodyHughston:
      return {1.0 / (12.0 * one_minus_r2), bh_normal(r)};
  }
  return {};
}

double MetricModel::log_radial_volume(RadialPoint p) const {
  const auto c = coefficients(p);
  return 0.5 * std::log(c.radial) + std::log(c.normal) + 2.0 * std::log(p.r);
}

std::vector<MetricModel> registered_metrics() {
  return {MetricModel::brody_hughston(),
          MetricModel::monotone(MonotoneFamily::kBures),
          MetricModel::monotone(MonotoneFamily::kMaximal),
          MetricModel::monotone(MonotoneFamily::kIdentric),
          MetricModel::monotone(MonotoneFamily::kMorozovaChentsov),
          MetricModel::monotone(MonotoneFamily::kImputedBH),
          MetricModel::bach_guiasu(),
          MetricModel::modified_brody_hughston()};
}

double generating_function(double lambda1, double lambda2) {
  constexpr double kScale = 8.0 * kPi * kPi * kPi;
  const double gap = lambda1 - lambda2;
  if (gap == 0.0) return kScale * std::exp(-lambda2);
  return -kScale * std::exp(-lambda2) * std::expm1(-gap) / gap;
}

namespace {

double sinh_half_over(double r) { return r == 0.0 ? 0.5 : std::sinh(0.5 * r) / r; }

}  // namespace

double generating_function(const QubitState& s) {
  return 16.0 * kPi * kPi * kPi * sinh_half_over(s.r()) / std::sqrt(kE);
}

double log_generating_function(const Eigen::Vector3d& x) {
  return std::log(16.0 * kPi * kPi * kPi) - 0.5 + std::log(sinh_half_over(x.norm()));
}

Eigen::Matrix3d fisher_from_generating(const QubitState& s, double step) {
  if (!(step >= 1e-6 && step <= 1e-3)) throw DomainError("Hessian step must lie in [1e-6, 1e-3]");
  if (!(s.r() + 3.0 * step < 1.0)) throw DomainError("Hessian stencil leaves the Bloch ball");
  const Eigen::Vector3d x = s.vector();
  const auto f = [](const Eigen::Vector3d& y) { return log_generating_function(y); };
  const double h2 = step * step;
  const double f0 = f(x);
  Eigen::Matrix3d hess;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d ei = step * Eigen::Vector3d::Unit(i);
    hess(i, i) = (f(x + ei) - 2.0 * f0 + f(x - ei)) / h2;
    for (int j = 0; j < i; ++j) {
      const Eigen::Vector3d ej = step * Eigen::Vector3d::Unit(j);
      const double v = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * h2);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return 0.5 * (hess + hess.transpose());
}

Eigen::Matrix3d metric_tensor_cartesian(const MetricModel& m, const QubitState& s) {
  const auto c = m.coefficients(s.r());
  if (s.r() == 0.0) return c.normal * Eigen::Matrix3d::Identity();
  const Eigen::Vector3d n = s.vector() / s.r();
  const Eigen::Matrix3d radial_proj = n * n.transpose();
  return c.radial * radial_proj + c.normal * (Eigen::Matrix3d::Identity() - radial_proj);
}

Eigen::Matrix3d metric_tensor_via_jacobian(const MetricModel& m, const QubitState& s) {
  const auto [x1, x2, x3] = s.cartesian();
  const double r = s.r();
  const double rho2 = x2 * x2 + x3 * x3;
  const double rho = std::sqrt(rho2);
  if (r == 0.0 || rho == 0.0) throw DomainError("spherical Jacobian is singular on the polar axis");
  const auto c = m.coefficients(r);
  Eigen::Matrix3d jac;
  jac << x1 / r, x2 / r, x3 / r,
         -rho / (r * r), x1 * x2 / (rho * r * r), x1 * x3 / (rho * r * r),
         0.0, -x3 / rho2, x2 / rho2;
  const double st = rho / r;
  const Eigen::Vector3d diag(c.radial, c.normal * r * r, c.normal * r * r * st * st);
  return jac.transpose() * diag.asDiagonal() * jac;
}

double line_element_distance(const MetricModel& m, const QubitState& s,
                             const SphericalDifferential& ds) {
  const auto& p = s.spherical();
  const auto c = m.coefficients(p.r);
  const double st = std::sin(p.theta);
  const double tangential = p.r * p.r * (ds.dtheta * ds.dtheta + st * st * ds.dphi * ds.dphi);
  return std::sqrt(c.radial * ds.dr * ds.dr + c.normal * tangential);
}

double imputed_f(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("imputed f is tabulated on t in [0, 1]");
  const double r = (1.0 - t) / (1.0 + t);
  if (r < kSeriesRadius) return 1.0 / ((1.0 + r) * bh_normal(r));
  const double d = t - 1.0;
  return -(d * d) / (2.0 * (1.0 + t) + d / std::tanh(r / 2.0));
}

double imputed_f_series_intercept() {
  return (-3.0 + 4.0 * kE - kE * kE) / ((kE - 3.0) * (kE - 3.0));
}

double imputed_f_series_slope() {
  return (7.0 - 16.0 * kE + 5.0 * kE * kE) / ((kE - 3.0) * (kE - 3.0));
}

double imputed_f_series(double t) { return imputed_f_series_intercept() + imputed_f_series_slope() * t; }

DominanceReport dominance_report(const MetricModel& a, const MetricModel& b,
                                 std::span<const double> r_grid,
                                 DominanceNormalization normalization, std::size_t region_count,
                                 double tolerance) {
  DominanceReport report;
  report.a = a.id();
  report.b = b.id();
  report.normalization = normalization;
  switch (normalization) {
    case DominanceNormalization::kAsDefined: report.scale = 1.0; break;
    case DominanceNormalization::kQuarterScaled: report.scale = 0.25; break;
    case DominanceNormalization::kOriginMatched:
      report.scale = a.coefficients(0.0).radial / b.coefficients(0.0).radial;
      break;
  }
  if (r_grid.empty()) return report;

  const Eigen::Vector3d dir = Eigen::Vector3d::Ones().normalized();
  bool dominates = true;
  bool radial_order = true;
  for (double r : r_grid) {
    const auto state = QubitState::from_cartesian(r * dir);
    const auto ca = a.coefficients(r);
    const auto cb = b.coefficients(r);
    const Eigen::Matrix3d diff = metric_tensor_cartesian(a, state) - report.scale * metric_tensor_cartesian(b, state);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(diff, Eigen::EigenvaluesOnly);
    DominanceSample sample{r, ca.radial - report.scale * cb.radial, ca.normal - report.scale * cb.normal,
                           es.eigenvalues()(0)};
    dominates = dominates && sample.min_eigenvalue >= -tolerance;
    if (r > 0.0) radial_order = radial_order && sample.radial_difference < 0.0;
    report.samples.push_back(sample);
  }
  report.a_dominates = dominates;
  report.b_radial_exceeds_a = radial_order;

  const auto [lo_it, hi_it] = std::minmax_element(r_grid.begin(), r_grid.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  region_count = std::max<std::size_t>(region_count, 1);
  const double width = (hi - lo) / static_cast<double>(region_count);
  report.regions.resize(region_count);
  for (std::size_t k = 0; k < region_count; ++k) {
    report.regions[k].r_lo = lo + width * static_cast<double>(k);
    report.regions[k].r_hi = k + 1 == region_count ? hi : lo + width * static_cast<double>(k + 1);
    report.regions[k].min_eigenvalue = std::numeric_limits<double>::infinity();
  }
  for (const auto& sample : report.samples) {
    std::size_t k = width > 0.0 ? static_cast<std::size_t>((sample.r - lo) / width) : 0;
    k = std::min(k, region_count - 1);
    auto& region = report.regions[k];
    ++region.samples;
    if (sample.min_eigenvalue < -tolerance) ++region.negative;
    region.min_eigenvalue = std::min(region.min_eigenvalue, sample.min_eigenvalue);
  }
  return report;
}

}  // namespace bloch

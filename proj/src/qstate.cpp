#include "bloch/qstate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phi(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

void check_radius(double r) {
  if (!(r >= 0.0) || r > 1.0 + kBallSlack) {
    throw DomainError("point outside the closed Bloch ball (r = " + std::to_string(r) + ")");
  }
}

}  // namespace

Spherical spherical_from_cartesian(const Cartesian& c) {
  const double r = std::hypot(c.x1, c.x2, c.x3);
  check_radius(r);
  if (r == 0.0) return {0.0, 0.0, 0.0};
  const double rho = std::hypot(c.x2, c.x3);
  const double theta = std::atan2(rho, c.x1);
  const double phi = rho == 0.0 ? 0.0 : wrap_phi(std::atan2(c.x3, c.x2));
  return {r, theta, phi};
}

Cartesian cartesian_from_spherical(const Spherical& s) {
  const double st = std::sin(s.theta);
  return {s.r * std::cos(s.theta), s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi)};
}

QubitState QubitState::from_cartesian(double x1, double x2, double x3) {
  const Cartesian c{x1, x2, x3};
  return QubitState(c, spherical_from_cartesian(c));
}

QubitState QubitState::from_cartesian(const Eigen::Vector3d& x) {
  return from_cartesian(x(0), x(1), x(2));
}

QubitState QubitState::from_spherical(double r, double theta, double phi) {
  check_radius(r);
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("polar angle outside [0, pi]: " + std::to_string(theta));
  }
  const Spherical s{r, theta, wrap_phi(phi)};
  return QubitState(cartesian_from_spherical(s), s);
}

bool DensityMatrix2::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::pair<double, double> DensityMatrix2::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m_, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

DensityMatrix2 bloch_to_density(const QubitState& s) {
  const auto& c = s.cartesian();
  using C = std::complex<double>;
  // Diagonal written as (a, 1 - a) so the trace rounds to exactly 1.
  const double a = 0.5 * (1.0 + c.x1);
  Eigen::Matrix2cd m;
  m << C(a, 0.0), C(0.5 * c.x2, 0.5 * c.x3),
       C(0.5 * c.x2, -0.5 * c.x3), C(1.0 - a, 0.0);
  return DensityMatrix2(m);
}

std::pair<double, double> eigenvalues(const QubitState& s) {
  const double upper = 0.5 * (1.0 + s.r());
  return {upper, 1.0 - upper};
}

}  // namespace bloch

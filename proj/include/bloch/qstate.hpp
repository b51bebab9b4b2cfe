#pragma once

#include <complex>
#include <utility>

#include <Eigen/Core>

namespace bloch {

struct Cartesian {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

/// Spherical chart with the polar axis along x1:
///   x1 = r cos(theta), x2 = r sin(theta) cos(phi), x3 = r sin(theta) sin(phi).
struct Spherical {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// A displacement (dr, dtheta, dphi) in the spherical chart.
struct SphericalDifferential {
  double dr = 0.0;
  double dtheta = 0.0;
  double dphi = 0.0;
};

// Slack allowed on |x| <= 1 for rounding in chart conversions.
inline constexpr double kBallSlack = 1e-12;

/// Degenerate angles resolve to 0: theta = phi = 0 at the origin, phi = 0 on
/// the polar axis. phi is returned in [0, 2pi).
Spherical spherical_from_cartesian(const Cartesian& c);
Cartesian cartesian_from_spherical(const Spherical& s);

/// A point of the closed Bloch ball, held in both charts.
class QubitState {
 public:
  QubitState() = default;

  static QubitState from_cartesian(double x1, double x2, double x3);
  static QubitState from_cartesian(const Eigen::Vector3d& x);
  /// theta must lie in [0, pi]; phi is wrapped into [0, 2pi).
  static QubitState from_spherical(double r, double theta, double phi);

  const Cartesian& cartesian() const { return cart_; }
  const Spherical& spherical() const { return sph_; }
  Eigen::Vector3d vector() const { return {cart_.x1, cart_.x2, cart_.x3}; }
  double r() const { return sph_.r; }

 private:
  QubitState(Cartesian c, Spherical s) : cart_(c), sph_(s) {}

  Cartesian cart_;
  Spherical sph_;
};

/// Hermitian, unit-trace 2x2 matrix
///   rho = 1/2 [[1 + x1, x2 + i x3], [x2 - i x3, 1 - x1]].
class DensityMatrix2 {
 public:
  explicit DensityMatrix2(const Eigen::Matrix2cd& m) : m_(m) {}

  const Eigen::Matrix2cd& matrix() const { return m_; }
  std::complex<double> operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return (m_(0, 0) + m_(1, 1)).real(); }
  bool is_hermitian(double tol = 1e-14) const;
  /// Ascending eigenvalues from the Hermitian eigensolver.
  std::pair<double, double> eigenvalues() const;

 private:
  Eigen::Matrix2cd m_;
};

DensityMatrix2 bloch_to_density(const QubitState& s);

/// ((1 + r)/2, (1 - r)/2).
std::pair<double, double> eigenvalues(const QubitState& s);

}  // namespace bloch

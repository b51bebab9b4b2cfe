#include "bloch/channels.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

using C = std::complex<double>;

// Operator basis matching the Bloch chart: B1 = Z, B2 = X, B3 = -Y.
std::array<Eigen::Matrix2cd, 3> bloch_basis() {
  Eigen::Matrix2cd z, x, my;
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  my << 0, C(0, 1), C(0, -1), 0;
  return {z, x, my};
}

// Phi(A) for an arbitrary 2x2 A, by linearity over {I, B1, B2, B3}.
Eigen::Matrix2cd act(const QubitChannel& c, const Eigen::Matrix2cd& a) {
  const auto basis = bloch_basis();
  const C a0 = 0.5 * a.trace();
  Eigen::Vector3cd coeff;
  for (int k = 0; k < 3; ++k) coeff(k) = 0.5 * (basis[k] * a).trace();

  const Eigen::Vector3cd image = c.linear().cast<C>() * coeff + a0 * c.translation().cast<C>();
  Eigen::Matrix2cd out = a0 * Eigen::Matrix2cd::Identity();
  for (int k = 0; k < 3; ++k) out += image(k) * basis[k];
  return out;
}

}  // namespace

QubitChannel::QubitChannel(Eigen::Matrix3d linear, Eigen::Vector3d translation, std::string label)
    : linear_(std::move(linear)), translation_(std::move(translation)), label_(std::move(label)) {}

QubitChannel QubitChannel::identity() {
  return {Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), "identity"};
}

QubitChannel QubitChannel::trigonometric(double u, double v) {
  const double cu = std::cos(u);
  const double cv = std::cos(v);
  std::ostringstream label;
  label.precision(17);
  label << "trigonometric(u=" << u << ", v=" << v << ")";
  return {Eigen::Vector3d(cu, cv, cu * cv).asDiagonal(), Eigen::Vector3d(0.0, 0.0, std::sin(u) * std::sin(v)),
          label.str()};
}

QubitState apply(const QubitChannel& c, const QubitState& s) {
  const Eigen::Vector3d image = c.linear() * s.vector() + c.translation();
  if (image.norm() > 1.0 + kBallSlack) {
    throw PositivityError("channel " + c.label() + " maps a state outside the Bloch ball");
  }
  return QubitState::from_cartesian(image);
}

ChoiWitness is_cptp(const QubitChannel& c, double tolerance) {
  ChoiWitness w;
  w.choi.setZero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
      e(i, j) = 1.0;
      w.choi.block<2, 2>(2 * i, 2 * j) = act(c, e);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(w.choi, Eigen::EigenvaluesOnly);
  w.min_eigenvalue = es.eigenvalues()(0);
  w.completely_positive = w.min_eigenvalue >= -tolerance;
  return w;
}

}  // namespace bloch

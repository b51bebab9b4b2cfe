#pragma once

#include <string>

#include <Eigen/Core>

#include "bloch/qstate.hpp"

namespace bloch {

/// A trace-preserving qubit map acting on Bloch vectors as x -> Lambda x + t.
class QubitChannel {
 public:
  QubitChannel(Eigen::Matrix3d linear, Eigen::Vector3d translation, std::string label = "channel");

  static QubitChannel identity();
  /// Two-parameter trigonometric family of extreme points of the CPTP set:
  ///   Lambda = diag(cos u, cos v, cos u cos v), t = (0, 0, sin u sin v).
  static QubitChannel trigonometric(double u, double v);

  const Eigen::Matrix3d& linear() const { return linear_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  const std::string& label() const { return label_; }

  bool is_unital() const { return translation_.isZero(0.0); }
  /// Affine Bloch maps preserve the trace by construction.
  bool is_trace_preserving() const { return true; }

 private:
  Eigen::Matrix3d linear_;
  Eigen::Vector3d translation_;
  std::string label_;
};

/// Throws PositivityError if the image leaves the closed ball.
QubitState apply(const QubitChannel& c, const QubitState& s);

struct ChoiWitness {
  bool completely_positive = false;
  /// Smallest eigenvalue of the Choi matrix.
  double min_eigenvalue = 0.0;
  Eigen::Matrix4cd choi;
};

/// Choi matrix sum_ij |i><j| (x) Phi(|i><j|), built in the Bloch chart
/// rho = (I + x1 Z + x2 X - x3 Y)/2; completely positive iff it is PSD
/// (eigenvalues >= -tolerance).
ChoiWitness is_cptp(const QubitChannel& c, double tolerance = 1e-12);

}  // namespace bloch

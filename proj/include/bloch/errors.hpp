#pragma once

#include <stdexcept>
#include <string>

namespace bloch {

/// Input outside the domain of an operation (e.g. a point off the Bloch ball).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quadrature that failed to stabilise under node doubling.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double coarse, double fine)
      : std::runtime_error(what), coarse_(coarse), fine_(fine) {}

  double coarse_estimate() const { return coarse_; }
  double fine_estimate() const { return fine_; }

 private:
  double coarse_;
  double fine_;
};

/// A channel mapped a state outside the closed Bloch ball.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown metric, density, or axis-set identifier.
class UnknownIdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bloch

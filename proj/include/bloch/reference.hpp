#pragma once

#include <string>
#include <vector>

#include "bloch/quadrature.hpp"

namespace bloch {

/// One checked quantity of the reference table.
struct CheckLine {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool pass = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckLine> checks;

  bool pass() const;
};

inline constexpr int kCriterionCount = 8;

/// Runs one criterion (1..8) of the reference reproduction table.
CriterionResult run_criterion(int id, const QuadratureSpec& spec = {});
std::vector<CriterionResult> run_reference_table(const QuadratureSpec& spec = {});

/// Fisher volumes (integrals of the unnormalised volume elements).
double fisher_volume(const MetricModel& metric, const QuadratureSpec& spec = {});

}  // namespace bloch

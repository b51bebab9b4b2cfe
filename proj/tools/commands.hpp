#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bloch/quadrature.hpp"

namespace bloch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAccuracy = 3;

/// Bad flags, malformed grids or config files. Maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "a:b:n" -> n equally spaced points from a to b inclusive (n = 1 gives a).
std::vector<double> parse_grid(std::string_view text);

/// Applies key=value overrides (radial_nodes, polar_nodes, azimuthal_nodes,
/// tolerance, boundary_grading, sine_substitution) to `spec`. Blank lines and
/// lines starting with '#' are skipped.
QuadratureSpec apply_config(const QuadratureSpec& spec, std::istream& in);
QuadratureSpec load_config(const std::string& path);

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bloch::cli

#pragma once

#include <iosfwd>
#include <string>

namespace uniformize {

/// Exit codes of the command-line tool.
enum ExitCode { ExitOk = 0, ExitUsage = 1, ExitValidation = 2, ExitSolver = 3 };

/// Runs the `uniformizer` command line.  Normal output goes to `out`,
/// diagnostics to `err`.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Mantissa with six decimals and a bare exponent ("1.256637e1"); magnitudes
/// below 1e-12 print as "0.000000e0".
std::string format_defect(double x);

} // namespace uniformize

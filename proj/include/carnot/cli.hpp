#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/oracle.hpp"

namespace carnot::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kHormanderFails = 3 };

/// Oracle mini-language:
///   halfspace a_1 .. a_{m+ell} d      {a . (z, t) > d}
///   paper-example-y-halfplane        {y >= 0} minus the x-axis in H^1 (alias punctured-y-halfplane)
///   xgraph a0 b c                    {x > a0 y + c u + b t} in H x R
///   ugraph a b c                     {u > a x + b y + c t} in H x R
///   ball r                           Euclidean ball of radius r at the origin
SetOracle parse_oracle(const GroupSpec& g, const std::string& text);

/// Comma-separated reals.
Vector parse_vector(const std::string& text);
/// "z_1,..,z_m;t_1,..,t_ell"; an empty t-part means ell = 0 or zeros.
Point parse_point(const GroupSpec& g, const std::string& text);

/// Runs the command line (args excludes the program name). Reports go to
/// `out` (or --out), diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carnot::cli

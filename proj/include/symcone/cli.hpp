#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "symcone/element.hpp"
#include "symcone/solver.hpp"

namespace symcone::cli {

inline constexpr int kExitSolved = 0;
inline constexpr int kExitDualSolved = 1;
inline constexpr int kExitOuterLimit = 2;
inline constexpr int kExitUsage = 64;  // bad flags or a malformed problem file
inline constexpr int kExitVerifyFailed = 65;
inline constexpr int kExitNoInput = 66;  // input file cannot be opened

/// Certificate file: {"side": "primal"|"dual", "cone": [{"kind", "size"}],
/// "coordinates": [...]}, coordinates in isometric form.
std::string certificate_json(Side side, const Element& x);

/// Runs the command line `args` (without the program name); returns the
/// exit code. Subcommands: solve, verify, bench, gen.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symcone::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmix {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitCap = 3;

// Entry point of the `lmix` tool. args excludes the program name. Reports go
// to `out` (or to the --json/--csv files), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmix

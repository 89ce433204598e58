#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace costshare::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

// Runs one command line (without the program name). Artifacts go to `out`
// unless --out is given; errors are written to `err` as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace costshare::cli

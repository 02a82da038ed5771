#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace driftbench {

/// Exit codes: 0 all checks pass, 2 some check failed, 1 usage or runtime error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailure = 2;

/// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace driftbench

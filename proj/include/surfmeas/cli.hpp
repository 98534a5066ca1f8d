#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace surfmeas {

/// Exit codes: 0 success, 1 invalid input or failed verification, 2 numerical
/// non-convergence.
int runCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int runCli(int argc, char **argv);

} // namespace surfmeas

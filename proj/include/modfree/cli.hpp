#ifndef MODFREE_CLI_HPP
#define MODFREE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace modfree::cli
{

enum ExitCode : int { ok = 0, certification_failure = 1, usage = 2, inconclusive = 3 };

// Runs one `siegel` invocation. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace modfree::cli

#endif

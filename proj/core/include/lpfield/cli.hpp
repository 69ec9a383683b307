#ifndef LPFIELD_CLI_HPP
#define LPFIELD_CLI_HPP

#include <string>
#include <vector>

namespace lpfield::cli {

/// Entry point behind the lpfield binary. argv[0] is the program name.
/// Returns the process exit code: 0 success, 1 validation error,
/// 2 numerical diagnostic failure.
int run(const std::vector<std::string>& argv);

}  // namespace lpfield::cli

#endif

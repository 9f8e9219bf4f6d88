#ifndef PERMSOLVE_CLI_HPP
#define PERMSOLVE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace permsolve {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitNumeric = 4;

/// Runs one subcommand. `args` excludes the program name; "-" as a path means
/// `in` or `out`. Diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Same, on the process's standard streams.
int dispatch(int argc, const char* const* argv);

}  // namespace permsolve

#endif  // PERMSOLVE_CLI_HPP

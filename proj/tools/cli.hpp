// tubekit - point tube pretext targets for point cloud videos
// Command-line front end.

#ifndef TUBEKIT_TOOLS_CLI_HPP
#define TUBEKIT_TOOLS_CLI_HPP

#include <iostream>

namespace tubekit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCompute = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. "-" paths read from `in` / write to `out`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace tubekit::cli

#endif  // TUBEKIT_TOOLS_CLI_HPP

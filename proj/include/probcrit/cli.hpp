#ifndef PROBCRIT_CLI_HPP
#define PROBCRIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace probcrit {

// Exit-code contract: 0 success, 1 I/O or format failure, 2 strict-mode
// validation failure, 64 usage.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIoFormat = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUsage = 64;

// Runs one invocation; args excludes the program name. Summaries go to
// `out`, diagnostics to `err`. The CLI itself is fully deterministic: all
// randomness in this project lives in the test suite.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace probcrit

#endif  // PROBCRIT_CLI_HPP

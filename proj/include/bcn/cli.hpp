#ifndef BCN_CLI_HPP
#define BCN_CLI_HPP

#include <iosfwd>

namespace bcn {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitUndetermined = 3;
inline constexpr int kExitFaultDetected = 4;

/// The bcnkit command line. Diagnostics go to `err`, results to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bcn

#endif  // BCN_CLI_HPP

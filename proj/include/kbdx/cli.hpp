#pragma once

#include <iosfwd>

namespace kbdx {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInvalidDpi = 2;
inline constexpr int kExitStalled = 3;

/// Entry point of the `kbdx` tool with injectable streams.
int runCli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace kbdx

#pragma once

#include <iosfwd>

namespace smfkit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;  // `check` found problems
inline constexpr int kFailure = 2;   // parse, usage or IO error

// Entry point for the `smfkit` command. Streams stand in for stdin, stdout
// and stderr so the whole front end can be driven from tests.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace smfkit::cli

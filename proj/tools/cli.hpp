#pragma once

// Command-line front end. `run_cli` is the whole program minus process
// plumbing, so tests can drive it in-process.
//
// Exit codes: 0 success or valid proof, 1 invalid proof (or a demo step
// that missed its expectation), 2 usage, I/O, format or digest error,
// 3 unsatisfying witness.

#include <iosfwd>
#include <string>
#include <vector>

namespace zkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnsatisfied = 3;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zkit::cli

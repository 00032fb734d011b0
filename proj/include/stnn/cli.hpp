#pragma once

#include <ostream>
#include <span>
#include <string>

namespace stnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one subcommand (ingest, train, eval, predict, simulate). `args`
// excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace stnn::cli

#pragma once

#include <ostream>

namespace semcache::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Entry point of the `semcache` tool. Subcommands: simulate, sweep,
// gen-trace, validate-kb, codec encode|decode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semcache::cli

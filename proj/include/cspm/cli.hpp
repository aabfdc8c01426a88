#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cspm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point for the `cspm` tool. args[0] is the program name.
/// Subcommands: ingest, metrics, report, synth, validate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cspm::cli

#pragma once

namespace ttroute {

/// Parses the command line and runs one subcommand. Returns 0 on success,
/// 1 on a runtime failure and 2 on bad arguments.
int run_cli(int argc, char** argv);

}  // namespace ttroute

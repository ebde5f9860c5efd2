#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bell::cli {

// Batch front end. Returns the process exit status:
//   0  success (and, for verification subcommands, no violations)
//   1  usage or domain error (diagnostic on err)
//   2  a verification subcommand found violations
// Output is deterministic: identical argv yields byte-identical output.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace bell::cli

// The `tableaux` command line. Exit codes: 0 when the queried property holds
// (or the command succeeded), 1 when it fails, 2 on usage or parse errors.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tableaux {

/// `args[0]` is the program name. `in` backs the `-` formula argument.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           std::istream& in);

}  // namespace tableaux

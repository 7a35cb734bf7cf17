#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symbidisk::cli {

/// Runs one subcommand. `args` excludes the program name. The JSON result (or
/// an {"error": {...}} object) goes to `out`; diagnostics go to `err`.
/// Returns 0 on success, 1 on domain errors, 2 on input or schema errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symbidisk::cli

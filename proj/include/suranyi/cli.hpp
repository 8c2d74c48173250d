#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace suranyi {

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitUsage = 2,
    kExitNewHit = 3,
    kExitCertification = 4,
};

// Runs one command line (without the program name). The JSON report goes to
// --out when given, otherwise to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Rebuilds the argument list that produced a report from its "command" and
// "config" blocks. Output paths (--out, --csv) are not part of the config.
std::vector<std::string> args_from_report(const nlohmann::json& report);

}  // namespace suranyi

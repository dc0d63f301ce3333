#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace stargraph::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kFailure = 3 };

/// One machine-readable check: {check, claim, value, expected, tolerance, pass}.
struct Verdict {
    std::string check;
    std::string claim;
    nlohmann::json value;
    nlohmann::json expected;
    double tolerance = 0.0;
    bool pass = false;
};

nlohmann::json to_json(const Verdict& v);

/// Entry point behind the `stargraph` executable. Subcommands: evolve,
/// kernel, spectrum, trace, oracle, invariance.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stargraph::cli

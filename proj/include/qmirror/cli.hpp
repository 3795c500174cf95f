#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmirror {

enum ExitCode { exit_ok = 0, exit_internal = 1, exit_input = 2, exit_not_realizable = 3, exit_fail = 4, exit_inconclusive = 5 };

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::uint64_t seed = 1;
    int starts = 200;
    double tol_newton = 1e-12, tol_dedup = 1e-7, tol_match = 1e-7;
    std::string out;

    void check() const;  // InvalidArgument unless tolerances > 0 and starts >= 1
};

int cli_main(int argc, const char* const* argv);

}  // namespace qmirror

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chibound::cli
{
    enum ExitCode : int
    {
        ok = 0,
        certification_failed = 1,
        input_error = 2,
        budget_exceeded = 3,
        inconclusive = 4
    };

    /// Runs one invocation. args excludes the program name.
    auto run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;
}

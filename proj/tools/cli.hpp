#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadiclab
{
    enum ExitCode : int
    {
        kOk = 0,
        kUsage = 2,
        kConfig = 3,
        kContract = 4,
        kOutput = 5
    };

    /// Bad parameter values or an unreadable config; maps to exit code 3.
    struct ConfigError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    /// "4..12", "4..12:2", "6,8,10,12" or any comma-separated mix.
    std::vector<std::int64_t> parse_range(const std::string &text);

    /// "0.5", "0.5,0.5".
    std::vector<double> parse_reals(const std::string &text);

    int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}

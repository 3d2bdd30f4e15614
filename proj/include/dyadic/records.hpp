#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dyadic
{
    /// One row of an experiment table.
    struct ExperimentRecord
    {
        std::string experiment;
        std::vector<std::pair<std::string, std::string>> params;
        double value = 0.0;
        std::vector<std::pair<std::string, double>> derived;
        double wall_time = 0.0;

        ExperimentRecord &param(std::string key, std::string v);
        ExperimentRecord &param(std::string key, double v);
        ExperimentRecord &put(std::string key, double v);

        std::optional<std::string> find_param(const std::string &key) const;
        std::optional<double> find_derived(const std::string &key) const;
    };

    enum class OutputFormat
    {
        Csv,
        JsonLines
    };

    /// Header: experiment, parameter keys, value, derived keys (first-seen
    /// order across all rows), then wall_time when timing is requested.
    /// Wall time is the only nondeterministic column, so it is opt-in.
    void write_csv(std::ostream &os, std::span<const ExperimentRecord> records, bool with_timing = false);

    void write_jsonl(std::ostream &os, std::span<const ExperimentRecord> records, bool with_timing = false);

    void write_records(std::ostream &os, std::span<const ExperimentRecord> records, OutputFormat format,
                       bool with_timing = false);
}

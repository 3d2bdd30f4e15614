#include "dyadic/records.hpp"

#include "dyadic/core.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace dyadic
{
    ExperimentRecord &ExperimentRecord::param(std::string key, std::string v)
    {
        params.emplace_back(std::move(key), std::move(v));
        return *this;
    }

    ExperimentRecord &ExperimentRecord::param(std::string key, double v)
    {
        return param(std::move(key), format_double(v));
    }

    ExperimentRecord &ExperimentRecord::put(std::string key, double v)
    {
        derived.emplace_back(std::move(key), v);
        return *this;
    }

    std::optional<std::string> ExperimentRecord::find_param(const std::string &key) const
    {
        for (const auto &[k, v] : params)
            if (k == key)
                return v;
        return std::nullopt;
    }

    std::optional<double> ExperimentRecord::find_derived(const std::string &key) const
    {
        for (const auto &[k, v] : derived)
            if (k == key)
                return v;
        return std::nullopt;
    }

    namespace
    {
        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }

        void add_key(std::vector<std::string> &keys, const std::string &k)
        {
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                keys.push_back(k);
        }
    }

    void write_csv(std::ostream &os, std::span<const ExperimentRecord> records, bool with_timing)
    {
        std::vector<std::string> param_keys, derived_keys;
        for (const auto &r : records)
        {
            for (const auto &p : r.params)
                add_key(param_keys, p.first);
            for (const auto &d : r.derived)
                add_key(derived_keys, d.first);
        }
        os << "experiment";
        for (const auto &k : param_keys)
            os << ',' << csv_field(k);
        os << ",value";
        for (const auto &k : derived_keys)
            os << ',' << csv_field(k);
        if (with_timing)
            os << ",wall_time";
        os << '\n';
        for (const auto &r : records)
        {
            os << csv_field(r.experiment);
            for (const auto &k : param_keys)
                os << ',' << csv_field(r.find_param(k).value_or(""));
            os << ',' << format_double(r.value);
            for (const auto &k : derived_keys)
            {
                os << ',';
                if (auto v = r.find_derived(k))
                    os << format_double(*v);
            }
            if (with_timing)
                os << ',' << format_double(r.wall_time);
            os << '\n';
        }
    }

    void write_jsonl(std::ostream &os, std::span<const ExperimentRecord> records, bool with_timing)
    {
        for (const auto &r : records)
        {
            nlohmann::ordered_json row;
            row["experiment"] = r.experiment;
            nlohmann::ordered_json params = nlohmann::ordered_json::object();
            for (const auto &[k, v] : r.params)
                params[k] = v;
            row["params"] = params;
            // JSON has no NaN/inf; those become null
            auto number = [](double v) -> nlohmann::ordered_json
            { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
            row["value"] = number(r.value);
            nlohmann::ordered_json derived = nlohmann::ordered_json::object();
            for (const auto &[k, v] : r.derived)
                derived[k] = number(v);
            row["derived"] = derived;
            if (with_timing)
                row["wall_time"] = r.wall_time;
            os << row.dump() << '\n';
        }
    }

    void write_records(std::ostream &os, std::span<const ExperimentRecord> records, OutputFormat format,
                       bool with_timing)
    {
        if (format == OutputFormat::Csv)
            write_csv(os, records, with_timing);
        else
            write_jsonl(os, records, with_timing);
    }
}

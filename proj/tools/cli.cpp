#include "cli.hpp"

#include "dyadic/experiments.hpp"
#include "dyadic/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace dyadiclab
{
    using dyadic::CesaroOrder;
    using dyadic::ExperimentRecord;
    using dyadic::Index;

    namespace
    {
        std::string trim(std::string s)
        {
            const auto first = s.find_first_not_of(" \t");
            if (first == std::string::npos)
                return {};
            return s.substr(first, s.find_last_not_of(" \t") - first + 1);
        }

        std::vector<std::string> split(const std::string &text, char sep)
        {
            std::vector<std::string> parts;
            std::stringstream in(text);
            for (std::string item; std::getline(in, item, sep);)
                parts.push_back(trim(item));
            return parts;
        }

        std::int64_t parse_int(const std::string &s)
        {
            std::int64_t v = 0;
            const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || end != s.data() + s.size())
                throw ConfigError("not an integer: '" + s + "'");
            return v;
        }

        double parse_real(const std::string &s)
        {
            double v = 0.0;
            const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v))
                throw ConfigError("not a real number: '" + s + "'");
            return v;
        }
    }

    std::vector<std::int64_t> parse_range(const std::string &text)
    {
        std::vector<std::int64_t> out;
        for (const std::string &token : split(text, ','))
        {
            if (token.empty())
                throw ConfigError("empty item in range '" + text + "'");
            const auto dots = token.find("..");
            if (dots == std::string::npos)
            {
                out.push_back(parse_int(token));
                continue;
            }
            std::string upper = token.substr(dots + 2);
            std::int64_t step = 1;
            if (const auto colon = upper.find(':'); colon != std::string::npos)
            {
                step = parse_int(upper.substr(colon + 1));
                upper = upper.substr(0, colon);
            }
            const std::int64_t lo = parse_int(token.substr(0, dots));
            const std::int64_t hi = parse_int(upper);
            if (step <= 0 || hi < lo)
                throw ConfigError("bad range '" + token + "'");
            if ((hi - lo) / step > 1'000'000)
                throw ConfigError("range too long: '" + token + "'");
            for (std::int64_t v = lo; v <= hi; v += step)
                out.push_back(v);
        }
        if (out.empty())
            throw ConfigError("empty range");
        return out;
    }

    std::vector<double> parse_reals(const std::string &text)
    {
        std::vector<double> out;
        for (const std::string &token : split(text, ','))
            out.push_back(parse_real(token));
        if (out.empty())
            throw ConfigError("empty list");
        return out;
    }

    namespace
    {
        struct Options
        {
            std::string output;
            std::string format = "csv";
            int threads = 0;
            bool timing = false;

            // systems-check
            int rank = 10;
            int transform_rank = 20;
            int unit_rank = 16;
            int samples = 500;
            std::uint64_t seed = 1;

            // kernel-survey
            std::string survey_system = "kaczmarz";
            std::string survey_alpha = "0.5";
            Index max_n = 4096;
            int survey_rank = 0;

            // goginava
            std::string goginava_alpha = "0.5";
            std::string n_range = "4..12";
            std::string variant = "both";

            // counterexample and converge
            std::string cone = "identity";
            double beta = 1.0;
            std::string counter_alpha = "0.5,0.5";
            std::string counter_n1 = "6,8,10,12";
            int oracle_max_n1 = 5;
            std::string converge_alpha = "1,1";
            std::string converge_system = "kaczmarz";
            std::string converge_n1 = "4..10";
            std::string function = "indicator";
            int support_rank = 2;
            std::uint64_t index = 1;
            int grid_rank = 10;

            // sneider
            int sneider_rank = 12;
            std::string sneider_n;
            std::string c_ladder = "0.05,0.1,0.2,0.5,1";

            // contrast
            std::string point = "1";
            std::string j_range = "3..11";
        };

        using Job = std::function<std::vector<ExperimentRecord>()>;

        int checked_int(std::int64_t v, std::int64_t lo, std::int64_t hi, const char *what)
        {
            if (v < lo || v > hi)
                throw ConfigError(std::string(what) + " must lie in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
            return static_cast<int>(v);
        }

        std::vector<int> int_list(const std::string &text, std::int64_t lo, std::int64_t hi, const char *what)
        {
            std::vector<int> out;
            for (std::int64_t v : parse_range(text))
                out.push_back(checked_int(v, lo, hi, what));
            return out;
        }

        std::vector<CesaroOrder> orders(const std::string &text)
        {
            std::vector<CesaroOrder> out;
            for (double a : parse_reals(text))
            {
                if (!(a > 0.0 && a <= 1.0))
                    throw ConfigError("alpha must lie in (0, 1]");
                out.emplace_back(a);
            }
            return out;
        }

        dyadic::SystemKind system_of(const std::string &name)
        {
            try
            {
                return dyadic::parse_system(name);
            }
            catch (const std::exception &)
            {
                throw ConfigError("unknown system '" + name + "'");
            }
        }

        dyadic::ConeSpec cone_of(const Options &o, int d)
        {
            if (d < 2)
                throw ConfigError("a cone needs at least two dimensions (give one alpha per dimension)");
            if (o.beta < 1.0)
                throw ConfigError("beta must be at least 1");
            const bool named = o.cone == "identity" || o.cone == "xlog" || o.cone.rfind("power:", 0) == 0;
            try
            {
                if (named)
                    return dyadic::ConeSpec::uniform(d, dyadic::crf::from_name(o.cone), o.beta);
                std::ifstream in(o.cone);
                if (!in)
                    throw ConfigError("cannot open cone file '" + o.cone + "'");
                dyadic::ConeSpec spec = dyadic::cone_from_json(nlohmann::json::parse(in));
                if (spec.d != d)
                    throw ConfigError("cone dimension does not match the number of alpha values");
                return spec;
            }
            catch (const ConfigError &)
            {
                throw;
            }
            catch (const std::exception &e)
            {
                throw ConfigError(std::string("bad cone: ") + e.what());
            }
        }

        Job systems_check_job(const Options &o)
        {
            const int m = checked_int(o.rank, 1, 14, "--rank");
            const int tm = checked_int(o.transform_rank, 1, 24, "--transform-rank");
            const int unit = checked_int(o.unit_rank, 1, 24, "--unit-rank");
            const int samples = checked_int(o.samples, 0, 1'000'000, "--samples");
            return [=, seed = o.seed, threads = o.threads]
            {
                auto rows = dyadic::systems_check_experiment(m, threads);
                auto more = dyadic::transform_check_experiment(tm, unit, samples, seed, threads);
                rows.insert(rows.end(), more.begin(), more.end());
                return rows;
            };
        }

        Job kernel_survey_job(const Options &o)
        {
            std::vector<dyadic::SystemKind> systems;
            if (o.survey_system == "both")
                systems = {dyadic::SystemKind::Paley, dyadic::SystemKind::Kaczmarz};
            else
                systems = {system_of(o.survey_system)};
            const auto alphas = orders(o.survey_alpha);
            if (o.max_n < 1 || o.max_n > (Index{1} << 20))
                throw ConfigError("--max-n must lie in [1, 2^20]");
            const int m = o.survey_rank == 0 ? dyadic::exact_rank(o.max_n)
                                             : checked_int(o.survey_rank, 1, 20, "--rank");
            return [=, max_n = o.max_n, threads = o.threads]
            {
                std::vector<ExperimentRecord> rows;
                for (auto s : systems)
                    for (const auto &a : alphas)
                    {
                        auto part = dyadic::kernel_survey_experiment(s, a, max_n, m, threads);
                        rows.insert(rows.end(), part.begin(), part.end());
                    }
                return rows;
            };
        }

        Job goginava_job(const Options &o)
        {
            const auto alphas = orders(o.goginava_alpha);
            const auto n = int_list(o.n_range, 1, 20, "--n");
            dyadic::GoginavaVariant variant;
            if (o.variant == "lemma")
                variant = dyadic::GoginavaVariant::Lemma;
            else if (o.variant == "proof")
                variant = dyadic::GoginavaVariant::Proof;
            else if (o.variant == "both")
                variant = dyadic::GoginavaVariant::Both;
            else
                throw ConfigError("--variant must be lemma, proof or both");
            return [=, threads = o.threads]
            {
                std::vector<ExperimentRecord> rows;
                for (const auto &a : alphas)
                {
                    auto part = dyadic::goginava_experiment(n, a, variant, threads);
                    rows.insert(rows.end(), part.begin(), part.end());
                }
                return rows;
            };
        }

        Job counterexample_job(const Options &o)
        {
            const auto alpha = orders(o.counter_alpha);
            const auto cone = cone_of(o, static_cast<int>(alpha.size()));
            const auto n1 = int_list(o.counter_n1, 1, 22, "--n1");
            for (std::size_t i = 1; i < alpha.size(); ++i)
                if (alpha[i - 1].value() > alpha[i].value())
                    throw ConfigError("alpha values must be nondecreasing");
            dyadic::RatioOptions options;
            options.threads = o.threads;
            options.oracle_max_n1 = o.oracle_max_n1;
            return [=]
            { return dyadic::ratio_experiment(n1, cone, alpha, options); };
        }

        Job converge_job(const Options &o)
        {
            const auto alpha = orders(o.converge_alpha);
            const int d = static_cast<int>(alpha.size());
            const auto cone = cone_of(o, d);
            const auto s = system_of(o.converge_system);
            const auto n1 = int_list(o.converge_n1, 0, 30, "--n1");
            const int m = checked_int(o.grid_rank, 1, 22 / d, "--grid-rank");
            std::vector<dyadic::SampledFunction> factors;
            std::string label;
            if (o.function == "indicator")
            {
                const int r = checked_int(o.support_rank, 0, m, "--support-rank");
                const dyadic::DyadicInterval I(dyadic::GroupPoint(0, r), r);
                factors.assign(static_cast<std::size_t>(d), dyadic::indicator(I, m));
                label = "indicator:" + std::to_string(r);
            }
            else if (o.function == "character")
            {
                if (o.index >= (std::uint64_t{1} << m))
                    throw ConfigError("--index must be below 2^grid-rank");
                factors.assign(static_cast<std::size_t>(d), dyadic::sample_walsh(s, o.index, m));
                label = "character:" + std::to_string(o.index);
            }
            else
                throw ConfigError("--function must be indicator or character");
            const auto f = dyadic::SampledFunction::tensor(factors);
            return [=]
            {
                auto rows = dyadic::convergence_experiment(f, cone, alpha, s, n1);
                for (auto &r : rows)
                    r.param("function", label).param("grid_rank", m);
                return rows;
            };
        }

        Job sneider_job(const Options &o)
        {
            const int m = checked_int(o.sneider_rank, 2, 20, "--rank");
            std::vector<Index> n;
            if (o.sneider_n.empty())
                for (int j = 2; j <= m; ++j)
                    n.push_back((Index{1} << j) - 1);
            else
                for (std::int64_t v : parse_range(o.sneider_n))
                {
                    if (v < 2 || v > (Index{1} << m))
                        throw ConfigError("--n values must lie in [2, 2^rank]");
                    n.push_back(v);
                }
            const auto ladder = parse_reals(o.c_ladder);
            return [=]
            { return dyadic::sneider_probe(n, m, ladder); };
        }

        Job contrast_job(const Options &o)
        {
            std::vector<int> coords;
            for (const std::string &c : split(o.point, ','))
            {
                if (c != "0" && c != "1")
                    throw ConfigError("--x takes comma-separated 0/1 coordinates");
                coords.push_back(c == "1");
            }
            if (coords.empty() || coords.size() > 24)
                throw ConfigError("--x needs between 1 and 24 coordinates");
            const auto x = dyadic::GroupPoint::from_coordinates(coords);
            const auto j = int_list(o.j_range, 0, 24, "--j");
            const auto [lo, hi] = std::minmax_element(j.begin(), j.end());
            if (static_cast<std::size_t>(*hi - *lo + 1) != j.size())
                throw ConfigError("--j must be a contiguous range");
            return [=, lo = *lo, hi = *hi]
            { return dyadic::kernel_contrast_probe(x, lo, hi); };
        }

        std::string summarize(const std::string &command, const std::vector<ExperimentRecord> &rows)
        {
            std::ostringstream line;
            line << command << ": " << rows.size() << " records";
            if (rows.empty())
                return line.str();
            const ExperimentRecord &last = rows.back();
            if (command == "counterexample")
            {
                line << ", R(" << *last.find_param("n1") << ") = " << dyadic::format_double(last.value)
                     << ", slope = " << dyadic::format_double(*last.find_derived("slope"));
            }
            else if (command == "contrast")
            {
                line << ", kaczmarz increasing = " << *last.find_derived("kaczmarz_increasing")
                     << ", final |paley| = " << dyadic::format_double(*last.find_derived("paley_final_abs"));
            }
            else if (command == "systems-check")
            {
                for (const auto &r : rows)
                    line << ", " << *r.find_param("check") << " = " << dyadic::format_double(r.value);
            }
            else
            {
                const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [](const auto &a, const auto &b)
                                                          { return a.value < b.value; });
                line << ", value range [" << dyadic::format_double(lo->value) << ", "
                     << dyadic::format_double(hi->value) << "]";
            }
            return line.str();
        }
    }

    int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        Options o;
        CLI::App app{"Dyadic harmonic analysis experiments"};
        app.name("dyadiclab");
        app.require_subcommand(1);
        app.fallthrough();
        app.set_config("--config", "", "Read options from an INI/TOML file; command-line flags take precedence");
        app.add_option("-o,--output", o.output, "Output file (default <command>.csv or .jsonl)");
        app.add_option("--format", o.format, "csv or jsonl")->capture_default_str();
        app.add_option("--threads", o.threads, "Worker threads, 0 = available parallelism")->capture_default_str();
        app.add_flag("--timing", o.timing, "Include the wall_time column");

        auto *systems = app.add_subcommand("systems-check", "Block equality, factorization, orthonormality and FWHT checks");
        systems->add_option("--rank", o.rank, "Resolution of the system checks")->capture_default_str();
        systems->add_option("--transform-rank", o.transform_rank, "Resolution of the FWHT checks")->capture_default_str();
        systems->add_option("--unit-rank", o.unit_rank, "Resolution of the unit-spectrum check")->capture_default_str();
        systems->add_option("--samples", o.samples, "Random Kaczmarz indices for the unit-spectrum check")->capture_default_str();
        systems->add_option("--seed", o.seed, "Seed for the random data")->capture_default_str();

        auto *survey = app.add_subcommand("kernel-survey", "L1 norms of Cesaro kernels and their dyadic block maxima");
        survey->add_option("--system", o.survey_system, "paley, kaczmarz or both")->capture_default_str();
        survey->add_option("--alpha", o.survey_alpha, "Comma-separated Cesaro orders")->capture_default_str();
        survey->add_option("--max-n", o.max_n, "Largest kernel index N")->capture_default_str();
        survey->add_option("--rank", o.survey_rank, "Grid rank, 0 = smallest rank with max-n <= 2^rank")->capture_default_str();

        auto *gog = app.add_subcommand("goginava", "Integral of the maximal Paley Cesaro kernel");
        gog->add_option("--alpha", o.goginava_alpha, "Comma-separated Cesaro orders")->capture_default_str();
        gog->add_option("--n", o.n_range, "Grid ranks, e.g. 4..12")->capture_default_str();
        gog->add_option("--variant", o.variant, "lemma, proof or both")->capture_default_str();

        auto *counter = app.add_subcommand("counterexample", "Maximal-to-Hardy norm ratio of the endpoint counterexample");
        counter->add_option("--alpha", o.counter_alpha, "One Cesaro order per dimension, nondecreasing")->capture_default_str();
        counter->add_option("--cone", o.cone, "identity, xlog, power:<p> or a JSON cone file")->capture_default_str();
        counter->add_option("--beta", o.beta, "Cone width for named cones")->capture_default_str();
        counter->add_option("--n1", o.counter_n1, "Values of n1, e.g. 6..12:2")->capture_default_str();
        counter->add_option("--oracle-max-n1", o.oracle_max_n1, "Run the full-dimensional oracle at the smallest n1 when n1 <= this")->capture_default_str();

        auto *converge = app.add_subcommand("converge", "Cone-restricted convergence of Cesaro means");
        converge->add_option("--alpha", o.converge_alpha, "One Cesaro order per dimension")->capture_default_str();
        converge->add_option("--system", o.converge_system, "paley or kaczmarz")->capture_default_str();
        converge->add_option("--cone", o.cone, "identity, xlog, power:<p> or a JSON cone file")->capture_default_str();
        converge->add_option("--beta", o.beta, "Cone width for named cones")->capture_default_str();
        converge->add_option("--n1", o.converge_n1, "Values of n1 along the cone diagonal")->capture_default_str();
        converge->add_option("--function", o.function, "indicator or character")->capture_default_str();
        converge->add_option("--support-rank", o.support_rank, "Rank of the dyadic interval for the indicator")->capture_default_str();
        converge->add_option("--index", o.index, "Character index for the character function")->capture_default_str();
        converge->add_option("--grid-rank", o.grid_rank, "Grid rank per dimension, at most 22/d")->capture_default_str();

        auto *sneider = app.add_subcommand("sneider", "Exceedance sets of the Kaczmarz Dirichlet kernel over log n");
        sneider->add_option("--rank", o.sneider_rank, "Grid rank")->capture_default_str();
        sneider->add_option("--n", o.sneider_n, "Values of n (default 2^j-1 for j = 2..rank)");
        sneider->add_option("--c", o.c_ladder, "Comma-separated thresholds C")->capture_default_str();

        auto *contrast = app.add_subcommand("contrast", "Kaczmarz and Paley Fejer kernels at a point along N = 2^j");
        contrast->add_option("--x", o.point, "Comma-separated 0/1 coordinates of the point")->capture_default_str();
        contrast->add_option("--j", o.j_range, "Contiguous range of j")->capture_default_str();

        for (auto *sub : app.get_subcommands({}))
            sub->configurable();

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &e)
        {
            // top-level help expands every subcommand so all flags are listed
            if (app.get_subcommands().empty())
            {
                out << app.help("", CLI::AppFormatMode::All);
                return kOk;
            }
            return app.exit(e, out, err);
        }
        catch (const CLI::CallForAllHelp &e)
        {
            return app.exit(e, out, err);
        }
        catch (const CLI::FileError &e)
        {
            err << "dyadiclab: config error: " << e.what() << '\n';
            return kConfig;
        }
        catch (const CLI::ConfigError &e)
        {
            err << "dyadiclab: config error: " << e.what() << '\n';
            return kConfig;
        }
        catch (const CLI::ParseError &e)
        {
            app.exit(e, out, err);
            return kUsage;
        }

        const std::string command = app.get_subcommands().front()->get_name();
        Job job;
        dyadic::OutputFormat format;
        try
        {
            if (o.format == "csv")
                format = dyadic::OutputFormat::Csv;
            else if (o.format == "jsonl")
                format = dyadic::OutputFormat::JsonLines;
            else
                throw ConfigError("--format must be csv or jsonl");
            if (o.threads < 0)
                throw ConfigError("--threads must be nonnegative");
            o.threads = dyadic::resolve_threads(o.threads);

            if (command == "systems-check")
                job = systems_check_job(o);
            else if (command == "kernel-survey")
                job = kernel_survey_job(o);
            else if (command == "goginava")
                job = goginava_job(o);
            else if (command == "counterexample")
                job = counterexample_job(o);
            else if (command == "converge")
                job = converge_job(o);
            else if (command == "sneider")
                job = sneider_job(o);
            else
                job = contrast_job(o);
        }
        catch (const std::exception &e)
        {
            err << "dyadiclab: config error: " << e.what() << '\n';
            return kConfig;
        }

        if (o.output.empty())
            o.output = command + (format == dyadic::OutputFormat::Csv ? ".csv" : ".jsonl");
        std::ofstream sink(o.output, std::ios::binary);
        std::ofstream sidecar(o.output + ".config.ini", std::ios::binary);
        if (!sink || !sidecar)
        {
            err << "dyadiclab: cannot write output '" << o.output << "'\n";
            return kOutput;
        }
        sidecar << "# reproduce with: dyadiclab --config " << std::filesystem::path(o.output + ".config.ini").filename().string()
                << '\n';
        // keep the shared options and the selected command only
        std::istringstream snapshot(app.config_to_str(true, false));
        for (std::string line; std::getline(snapshot, line);)
        {
            bool foreign = false;
            for (const auto *sub : app.get_subcommands({}))
                foreign = foreign || (sub->get_name() != command && line.rfind(sub->get_name() + ".", 0) == 0);
            if (!foreign)
                sidecar << line << '\n';
        }
        sidecar.close();

        std::vector<ExperimentRecord> rows;
        try
        {
            rows = job();
        }
        catch (const std::exception &e)
        {
            err << "dyadiclab: contract violation: " << e.what() << '\n';
            return kContract;
        }

        dyadic::write_records(sink, rows, format, o.timing);
        sink.close();
        if (!sink)
        {
            err << "dyadiclab: failed writing '" << o.output << "'\n";
            return kOutput;
        }
        out << summarize(command, rows) << " -> " << o.output << '\n';
        return kOk;
    }
}

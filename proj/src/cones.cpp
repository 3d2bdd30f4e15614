#include "dyadic/cones.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace dyadic
{
    namespace crf
    {
        CRFSpec identity()
        {
            return {"identity", [](double x)
                    { return x; },
                    2.0, 2.0, 2.0, {}};
        }

        CRFSpec power(double p)
        {
            require(p >= 1.0, "crf::power: exponent must be at least 1");
            const double c = std::pow(2.0, p);
            return {"power:" + format_double(p), [p](double x)
                    { return std::pow(x, p); },
                    2.0, c, c, {}};
        }

        CRFSpec x_log()
        {
            return {"xlog", [](double x)
                    { return x * (1.0 + std::log(x)); },
                    2.0, 2.0, 2.0 * (1.0 + std::log(2.0)), {}};
        }

        CRFSpec table(std::vector<std::pair<double, double>> knots, double zeta, double c_lo, double c_hi)
        {
            require(knots.size() >= 2, "crf::table: need at least two knots");
            require(knots.front().first == 1.0, "crf::table: first knot must be at x = 1");
            for (std::size_t i = 0; i < knots.size(); ++i)
            {
                require(knots[i].second >= 1.0, "crf::table: values must be at least 1");
                if (i > 0)
                    require(knots[i].first > knots[i - 1].first, "crf::table: knots must be increasing in x");
            }
            auto shared = std::make_shared<const std::vector<std::pair<double, double>>>(knots);
            auto gamma = [shared](double x)
            {
                const auto &k = *shared;
                // segment whose right end is the first knot beyond x, clamped to the last segment
                auto it = std::upper_bound(k.begin(), k.end(), x,
                                           [](double v, const auto &knot)
                                           { return v < knot.first; });
                std::size_t hi = static_cast<std::size_t>(it - k.begin());
                hi = std::clamp<std::size_t>(hi, 1, k.size() - 1);
                const auto &[x0, y0] = k[hi - 1];
                const auto &[x1, y1] = k[hi];
                const double slope = std::log(y1 / y0) / std::log(x1 / x0);
                return y0 * std::exp(slope * std::log(x / x0));
            };
            return {"table", gamma, zeta, c_lo, c_hi, std::move(knots)};
        }

        CRFSpec from_name(const std::string &name)
        {
            if (name == "identity")
                return identity();
            if (name == "xlog")
                return x_log();
            if (name.rfind("power:", 0) == 0)
            {
                std::size_t used = 0;
                const std::string arg = name.substr(6);
                double p = 0.0;
                try
                {
                    p = std::stod(arg, &used);
                }
                catch (const std::exception &)
                {
                    used = 0;
                }
                require(used == arg.size() && !arg.empty(), "crf: malformed power exponent");
                return power(p);
            }
            throw ContractViolation("crf: unknown function '" + name + "'");
        }
    }

    CrfCheck crf_validate(const CRFSpec &c, double x_max, int samples)
    {
        require(x_max >= 1.0, "crf_validate: x_max must be at least 1");
        require(samples >= 2, "crf_validate: need at least two samples");
        require(c.zeta > 1.0 && c.c_lo > 1.0 && c.c_hi > 1.0, "crf_validate: constants must exceed 1");

        constexpr double rel = 1e-12;
        if (std::abs(c.gamma(1.0) - 1.0) > rel)
            return {false, "gamma(1) != 1", 1.0};
        double previous = 0.0;
        for (int i = 0; i < samples; ++i)
        {
            const double x = std::pow(x_max, static_cast<double>(i) / (samples - 1));
            const double g = c.gamma(x);
            if (i > 0 && !(g > previous))
                return {false, "not strictly increasing", x};
            previous = g;
            const double scaled = c.gamma(c.zeta * x);
            if (scaled < c.c_lo * g * (1.0 - rel))
                return {false, "lower doubling bound violated", x};
            if (scaled > c.c_hi * g * (1.0 + rel))
                return {false, "upper doubling bound violated", x};
        }
        return {};
    }

    ConeSpec ConeSpec::uniform(int d, const CRFSpec &gamma, double beta)
    {
        require(d >= 1, "ConeSpec: dimension must be positive");
        require(beta >= 1.0, "ConeSpec: beta must be at least 1");
        ConeSpec out;
        out.d = d;
        out.crf.assign(static_cast<std::size_t>(d - 1), gamma);
        out.beta.assign(static_cast<std::size_t>(d - 1), beta);
        return out;
    }

    bool cone_contains(const ConeSpec &spec, std::span<const Index> n)
    {
        require(static_cast<int>(n.size()) == spec.d, "cone_contains: dimension mismatch");
        require(n[0] >= 1, "cone_contains: n_1 must be positive");
        const double n1 = static_cast<double>(n[0]);
        for (int j = 1; j < spec.d; ++j)
        {
            const auto idx = static_cast<std::size_t>(j - 1);
            const double g = spec.crf[idx].gamma(n1);
            const double nj = static_cast<double>(n[static_cast<std::size_t>(j)]);
            if (nj < g / spec.beta[idx] || nj > g * spec.beta[idx])
                return false;
        }
        return true;
    }

    std::vector<int> nbar_of(const ConeSpec &spec, int n1)
    {
        require(n1 >= 0 && n1 < 1024, "nbar_of: n1 out of range");
        std::vector<int> out{n1};
        const double x = std::ldexp(1.0, n1);
        for (const auto &c : spec.crf)
        {
            const double g = c.gamma(x);
            require(g >= 1.0 && std::isfinite(g), "nbar_of: gamma out of range");
            out.push_back(std::ilogb(g));
        }
        return out;
    }

    std::vector<Index> ln_index(const ConeSpec &spec, int n1, Index N)
    {
        require(n1 >= 0 && n1 < 62, "ln_index: n1 out of range");
        require(N > 0 && N < (Index{1} << n1), "ln_index: N must satisfy 0 < N < 2^n1");
        const Index first = (Index{1} << n1) + N;
        std::vector<Index> out{first};
        for (const auto &c : spec.crf)
        {
            const double g = std::floor(c.gamma(static_cast<double>(first)));
            require(g >= 1.0 && g < 9.0e18, "ln_index: gamma out of range");
            out.push_back(static_cast<Index>(g));
        }
        return out;
    }

    namespace
    {
        CRFSpec crf_from_json(const nlohmann::json &j)
        {
            const std::string kind = j.value("gamma", std::string("identity"));
            CRFSpec c;
            if (kind == "table")
            {
                std::vector<std::pair<double, double>> knots;
                for (const auto &pt : j.at("table"))
                    knots.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
                c = crf::table(std::move(knots), j.at("zeta").get<double>(),
                               j.at("c_lo").get<double>(), j.at("c_hi").get<double>());
            }
            else if (kind == "power")
                c = crf::power(j.at("exponent").get<double>());
            else
                c = crf::from_name(kind);
            c.zeta = j.value("zeta", c.zeta);
            c.c_lo = j.value("c_lo", c.c_lo);
            c.c_hi = j.value("c_hi", c.c_hi);
            return c;
        }
    }

    ConeSpec cone_from_json(const nlohmann::json &j)
    {
        ConeSpec out;
        out.d = j.value("d", 2);
        require(out.d >= 1, "cone: d must be positive");
        const auto &dims = j.at("dims");
        require(dims.is_array() && !dims.empty(), "cone: 'dims' must be a nonempty array");
        require(dims.size() == 1 || static_cast<int>(dims.size()) == out.d - 1,
                "cone: 'dims' must have one entry or d-1 entries");
        for (int k = 0; k < out.d - 1; ++k)
        {
            const auto &entry = dims.size() == 1 ? dims[0] : dims[static_cast<std::size_t>(k)];
            out.crf.push_back(crf_from_json(entry));
            const double beta = entry.value("beta", 1.0);
            require(beta >= 1.0, "cone: beta must be at least 1");
            out.beta.push_back(beta);
        }
        return out;
    }

    nlohmann::json cone_to_json(const ConeSpec &spec)
    {
        nlohmann::json dims = nlohmann::json::array();
        for (std::size_t k = 0; k < spec.crf.size(); ++k)
        {
            const auto &c = spec.crf[k];
            nlohmann::json entry{{"gamma", c.name}, {"zeta", c.zeta}, {"c_lo", c.c_lo}, {"c_hi", c.c_hi}, {"beta", spec.beta[k]}};
            if (c.name.rfind("power:", 0) == 0)
            {
                entry["gamma"] = "power";
                entry["exponent"] = std::stod(c.name.substr(6));
            }
            if (!c.knots.empty())
            {
                nlohmann::json pts = nlohmann::json::array();
                for (const auto &[x, y] : c.knots)
                    pts.push_back({x, y});
                entry["table"] = pts;
            }
            dims.push_back(entry);
        }
        return {{"d", spec.d}, {"dims", dims}};
    }
}

#pragma once

#include "dyadic/core.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <utility>

namespace dyadic
{
    /// Cone-like restriction function γ with its doubling constants:
    /// c_lo·γ(x) <= γ(ζx) <= c_hi·γ(x) for x >= 1, γ(1) = 1, γ increasing.
    /// The handle must be safe to call concurrently.
    struct CRFSpec
    {
        std::string name;
        std::function<double(double)> gamma;
        double zeta = 2.0;
        double c_lo = 2.0;
        double c_hi = 2.0;
        /// Interpolation knots when the function came from a table.
        std::vector<std::pair<double, double>> knots;
    };

    namespace crf
    {
        CRFSpec identity();
        /// x^p, p >= 1; ζ = 2, c_lo = c_hi = 2^p.
        CRFSpec power(double p);
        /// x(1 + ln x); ζ = 2, c_lo = 2, c_hi = 2(1 + ln 2).
        CRFSpec x_log();
        /// Piecewise-geometric interpolation of (x, γ(x)) knots starting at (1, 1);
        /// the last segment's log-log slope extends past the final knot.
        CRFSpec table(std::vector<std::pair<double, double>> knots, double zeta, double c_lo, double c_hi);

        /// "identity", "xlog", "power:<p>".
        CRFSpec from_name(const std::string &name);
    }

    /// Result of a sample-based CRF check; holds the first violation found.
    struct CrfCheck
    {
        bool ok = true;
        std::string violation;
        double at_x = 0.0;

        explicit operator bool() const { return ok; }
    };

    /// Checks γ(1) = 1, strict monotonicity and the two-sided doubling
    /// inequality on a geometric grid of `samples` points in [1, x_max].
    /// Passing is evidence on the sampled points only, not a proof.
    CrfCheck crf_validate(const CRFSpec &c, double x_max, int samples);

    /// L = {n : β_j^{-1} γ_j(n_1) <= n_j <= β_j γ_j(n_1), j = 2..d}.
    struct ConeSpec
    {
        int d = 2;
        std::vector<CRFSpec> crf;  // j = 2..d
        std::vector<double> beta;  // j = 2..d, each >= 1

        static ConeSpec uniform(int d, const CRFSpec &gamma, double beta);
    };

    bool cone_contains(const ConeSpec &spec, std::span<const Index> n);

    /// n̄_1 = (n_1, |γ_2(2^{n_1})|, ..., |γ_d(2^{n_1})|).
    std::vector<int> nbar_of(const ConeSpec &spec, int n1);

    /// L^N = (2^{n_1} + N, ⌊γ_2(2^{n_1} + N)⌋, ...) for 0 < N < 2^{n_1}.
    std::vector<Index> ln_index(const ConeSpec &spec, int n1, Index N);

    /// Cone description:
    ///   {"d": 2, "dims": [{"gamma": "identity" | "xlog" | "power", "exponent": 1.5,
    ///                       "table": [[1,1],[2,3],...], "zeta": 2, "c_lo": 2, "c_hi": 2,
    ///                       "beta": 1}]}
    /// `dims` lists j = 2..d; a single entry is replicated.
    ConeSpec cone_from_json(const nlohmann::json &j);
    nlohmann::json cone_to_json(const ConeSpec &spec);
}

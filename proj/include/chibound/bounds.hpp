#pragma once

#include <chibound/numeric.hpp>

#include <nlohmann/json.hpp>

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace chibound
{
    struct BoundFn;
    using BoundPtr = std::shared_ptr<const BoundFn>;

    struct Constant
    {
        Rational c;
    };

    /// Non-negative integer coefficients, lowest degree first.
    struct Polynomial
    {
        std::vector<BigInt> coefficients;
    };

    /// 2^(c(x-1))
    struct Exponential
    {
        unsigned c = 1;
    };

    /// Values on 0..N; evaluation beyond N is refused.
    struct Tabulated
    {
        std::vector<Rational> values;
    };

    /// k -> inner(k)^k, and 1 at k = 0.
    struct StarPower
    {
        BoundPtr inner;
    };

    /// x -> x^(3A+11)
    struct PolyStar
    {
        unsigned a = 1;
    };

    /// x -> inner(x) * x^(log2 x), and 0 at x = 0.
    struct SupermultStar
    {
        BoundPtr inner;
    };

    /// x -> 2^((c+1)x)
    struct ExpStar
    {
        unsigned c = 1;
    };

    /// n -> inner(n) + 2k^2 - 1
    struct KGlueShift
    {
        BoundPtr inner;
        unsigned k = 1;
    };

    /// n -> floor(inner(n))^e
    struct DepthPower
    {
        BoundPtr inner;
        unsigned e = 1;
    };

    struct BoundFn
    {
        std::variant<Constant, Polynomial, Exponential, Tabulated, StarPower, PolyStar, SupermultStar, ExpStar,
                KGlueShift, DepthPower>
            node;
    };

    auto constant_bound(Rational c) -> BoundPtr;
    auto polynomial_bound(std::vector<BigInt> coefficients) -> BoundPtr;
    auto monomial_bound(unsigned a) -> BoundPtr;
    auto exponential_bound(unsigned c) -> BoundPtr;
    auto tabulated_bound(std::vector<Rational> values) -> BoundPtr;
    auto star_bound(BoundPtr f) -> BoundPtr;
    auto poly_star_bound(unsigned a) -> BoundPtr;
    auto supermult_star_bound(BoundPtr f) -> BoundPtr;
    auto exp_star_bound(unsigned c) -> BoundPtr;
    auto kglue_bound(BoundPtr f, unsigned k) -> BoundPtr;
    auto depth_power_bound(BoundPtr f, unsigned e) -> BoundPtr;

    /// The exponent B = 2A+11 paired with g(x) = x^(A+B).
    inline auto poly_star_b(unsigned a) -> unsigned { return 2 * a + 11; }

    struct Interval
    {
        Rational lo, hi;

        auto is_point() const -> bool { return lo == hi; }
    };

    inline constexpr unsigned default_precision_bits = 64;
    inline constexpr unsigned max_precision_bits = 8192;

    /// Exact point intervals except where x^(log2 x) is irrational; there the
    /// interval is computed with outward rounding at the given precision.
    auto eval(const BoundFn & f, unsigned n, unsigned precision_bits = default_precision_bits) -> Interval;
    auto eval(const BoundPtr & f, unsigned n, unsigned precision_bits = default_precision_bits) -> Interval;

    /// floor of the lower end; a palette size certified to stay within f(n).
    auto floor_eval(const BoundPtr & f, unsigned n, unsigned precision_bits = default_precision_bits) -> BigInt;

    /// f(m) f(n) <= f(mn) for all 1 <= m, n with mn <= N.
    auto check_supermultiplicative(const BoundPtr & f, unsigned n_max) -> bool;

    /// Non-decreasing on 0..N.
    auto check_monotone(const BoundPtr & f, unsigned n_max) -> bool;

    auto format_bound(const BoundFn & f) -> std::string;
    auto format_bound(const BoundPtr & f) -> std::string;

    /// Grammar: x^A, polynomials such as 3*x^2+x+1, 2^(c*(x-1)), const c,
    /// table(v0,...,vN), star(f), polystar(A), supermultstar(f), expstar(c),
    /// kglue(f,k), pow(f,e). Throws ParseError.
    auto parse_bound(const std::string & text) -> BoundPtr;

    enum class Verdict
    {
        pass,
        fail,
        inconclusive
    };

    auto verdict_name(Verdict v) -> std::string;

    struct BoundCheck
    {
        Verdict verdict = Verdict::inconclusive;
        Interval value;
        unsigned precision_bits = default_precision_bits;
    };

    /// Compares colours against f(omega), doubling the precision while the
    /// verdict is inconclusive, up to max_bits.
    auto check_bound(const BoundPtr & f, unsigned omega, std::size_t colours,
            unsigned start_bits = default_precision_bits, unsigned max_bits = max_precision_bits) -> BoundCheck;

    struct Certificate
    {
        BoundPtr bound;
        std::string method;
        unsigned omega = 0;
        std::size_t colors_used = 0;
        Verdict verdict = Verdict::inconclusive;
        Interval bound_value;
        unsigned precision_bits = default_precision_bits;
        nlohmann::json trace;
    };

    /// Recomputes the verdict of cert from its bound, omega and colour count.
    auto check_certificate(const Certificate & cert, unsigned start_bits = default_precision_bits,
            unsigned max_bits = max_precision_bits) -> Verdict;

    /// Fills verdict, bound_value and precision_bits.
    auto certify(Certificate & cert, unsigned start_bits = default_precision_bits) -> void;

    auto certificate_json(const Certificate & cert) -> nlohmann::json;
}

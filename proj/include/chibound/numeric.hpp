#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace chibound
{
    using BigInt = boost::multiprecision::mpz_int;

    /// Exact rational, always in lowest terms with a positive denominator.
    using Rational = boost::multiprecision::mpq_rational;

    inline auto to_string(const Rational & q) -> std::string
    {
        if (denominator(q) == 1)
            return numerator(q).str();
        return numerator(q).str() + "/" + denominator(q).str();
    }

    /// Parses "p" or "p/q"; throws ParseError on anything else.
    auto parse_rational(const std::string & text) -> Rational;

    auto power(const BigInt & base, unsigned exponent) -> BigInt;
    auto power(const Rational & base, unsigned exponent) -> Rational;

    auto floor_of(const Rational & q) -> BigInt;
}

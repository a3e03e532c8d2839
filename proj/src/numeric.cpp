#include <chibound/numeric.hpp>
#include <chibound/errors.hpp>

#include <regex>

namespace chibound
{
    auto parse_rational(const std::string & text) -> Rational
    {
        static const std::regex shape(R"(\s*(-?[0-9]+)(?:\s*/\s*([0-9]+))?\s*)");
        std::smatch m;
        if (! std::regex_match(text, m, shape))
            throw ParseError("not a rational number: '" + text + "'");
        BigInt num(m[1].str());
        BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
        if (den == 0)
            throw ParseError("zero denominator in '" + text + "'");
        return Rational(num, den);
    }

    auto power(const BigInt & base, unsigned exponent) -> BigInt
    {
        BigInt result = 1, b = base;
        while (exponent) {
            if (exponent & 1u)
                result *= b;
            b *= b;
            exponent >>= 1;
        }
        return result;
    }

    auto power(const Rational & base, unsigned exponent) -> Rational
    {
        return Rational(power(numerator(base), exponent), power(denominator(base), exponent));
    }

    auto floor_of(const Rational & q) -> BigInt
    {
        BigInt n = numerator(q), d = denominator(q);
        BigInt quot = n / d;
        if (n < 0 && quot * d != n)
            quot -= 1;
        return quot;
    }
}

#include <chibound/bounds.hpp>
#include <chibound/errors.hpp>

#include <mpfr.h>

#include <algorithm>
#include <bit>
#include <cctype>

using std::string;
using std::vector;

namespace chibound
{
    namespace
    {
        template <typename... Ts>
        struct Overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <typename... Ts>
        Overloaded(Ts...) -> Overloaded<Ts...>;

        auto wrap(BoundFn f) -> BoundPtr
        {
            return std::make_shared<const BoundFn>(std::move(f));
        }

        auto point(Rational q) -> Interval
        {
            return Interval{q, q};
        }

        auto times(const Interval & a, const Interval & b) -> Interval
        {
            Rational p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
            return Interval{*std::min_element(std::begin(p), std::end(p)), *std::max_element(std::begin(p), std::end(p))};
        }

        auto pow2(long e) -> Rational
        {
            if (e >= 0)
                return Rational(BigInt(1) << static_cast<unsigned>(e));
            return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(-e));
        }

        class Mpfr
        {
        public:
            explicit Mpfr(unsigned bits) { mpfr_init2(value, bits); }
            ~Mpfr() { mpfr_clear(value); }
            Mpfr(const Mpfr &) = delete;
            auto operator=(const Mpfr &) -> Mpfr & = delete;

            auto exact() const -> Rational
            {
                BigInt mantissa;
                auto e = mpfr_get_z_2exp(mantissa.backend().data(), value);
                return Rational(mantissa) * pow2(e);
            }

            mpfr_t value;
        };

        // x^(log2 x) for x >= 1, exact when x is a power of two.
        auto log_power(unsigned x, unsigned bits) -> Interval
        {
            if ((x & (x - 1)) == 0) {
                long e = std::countr_zero(x);
                return point(pow2(e * e));
            }
            Mpfr arg(64), lo(bits), hi(bits);
            mpfr_set_ui(arg.value, x, MPFR_RNDN);
            mpfr_log2(lo.value, arg.value, MPFR_RNDD);
            mpfr_log2(hi.value, arg.value, MPFR_RNDU);
            mpfr_sqr(lo.value, lo.value, MPFR_RNDD);
            mpfr_sqr(hi.value, hi.value, MPFR_RNDU);
            mpfr_exp2(lo.value, lo.value, MPFR_RNDD);
            mpfr_exp2(hi.value, hi.value, MPFR_RNDU);
            return Interval{lo.exact(), hi.exact()};
        }

        auto nonnegative_power(const Interval & v, unsigned e, const char * what) -> Interval
        {
            if (v.lo < 0)
                throw DomainError(string(what) + ": negative base");
            return Interval{power(v.lo, e), power(v.hi, e)};
        }

        class Parser
        {
        public:
            explicit Parser(const string & text) : _text(text) {}

            auto parse() -> BoundPtr
            {
                auto f = expression();
                skip();
                if (_pos != _text.size())
                    fail("unexpected trailing text");
                return f;
            }

        private:
            const string & _text;
            std::size_t _pos = 0;

            [[noreturn]] auto fail(const string & why) const -> void
            {
                throw ParseError("bound expression '" + _text + "': " + why + " at offset " + std::to_string(_pos));
            }

            auto skip() -> void
            {
                while (_pos < _text.size() && std::isspace(static_cast<unsigned char>(_text[_pos])))
                    ++_pos;
            }

            auto accept(const string & token) -> bool
            {
                skip();
                if (_text.compare(_pos, token.size(), token) == 0) {
                    _pos += token.size();
                    return true;
                }
                return false;
            }

            auto expect(const string & token) -> void
            {
                if (! accept(token))
                    fail("expected '" + token + "'");
            }

            auto at_digit() -> bool
            {
                skip();
                return _pos < _text.size() && std::isdigit(static_cast<unsigned char>(_text[_pos]));
            }

            auto integer() -> BigInt
            {
                if (! at_digit())
                    fail("expected an integer");
                auto start = _pos;
                while (_pos < _text.size() && std::isdigit(static_cast<unsigned char>(_text[_pos])))
                    ++_pos;
                return BigInt(_text.substr(start, _pos - start));
            }

            auto small() -> unsigned
            {
                auto v = integer();
                if (v > 1'000'000)
                    fail("integer parameter too large");
                return v.convert_to<unsigned>();
            }

            auto rational() -> Rational
            {
                skip();
                bool negative = accept("-");
                BigInt num = integer(), den = 1;
                if (accept("/")) {
                    den = integer();
                    if (den == 0)
                        fail("zero denominator");
                }
                Rational q(num, den);
                return negative ? Rational(-q) : q;
            }

            auto expression() -> BoundPtr
            {
                if (accept("const"))
                    return constant_bound(rational());
                if (accept("star("))
                    return closing(star_bound(expression()));
                if (accept("polystar(")) {
                    auto a = small();
                    if (a == 0)
                        fail("polystar needs a positive exponent");
                    return closing(poly_star_bound(a));
                }
                if (accept("supermultstar("))
                    return closing(supermult_star_bound(expression()));
                if (accept("expstar(")) {
                    auto c = small();
                    if (c == 0)
                        fail("expstar needs a positive constant");
                    return closing(exp_star_bound(c));
                }
                if (accept("kglue(")) {
                    auto inner = expression();
                    expect(",");
                    auto k = small();
                    if (k == 0)
                        fail("kglue needs a positive k");
                    return closing(kglue_bound(inner, k));
                }
                if (accept("pow(")) {
                    auto inner = expression();
                    expect(",");
                    return closing(depth_power_bound(inner, small()));
                }
                if (accept("table(")) {
                    vector<Rational> values{rational()};
                    while (accept(","))
                        values.push_back(rational());
                    expect(")");
                    return tabulated_bound(std::move(values));
                }
                if (accept("2^(")) {
                    unsigned c = 1;
                    if (at_digit()) {
                        c = small();
                        expect("*");
                        expect("(");
                        expect("x");
                        expect("-");
                        expect("1");
                        expect(")");
                    }
                    else {
                        expect("x");
                        expect("-");
                        expect("1");
                    }
                    expect(")");
                    return exponential_bound(c);
                }
                return polynomial();
            }

            auto closing(BoundPtr f) -> BoundPtr
            {
                expect(")");
                return f;
            }

            auto polynomial() -> BoundPtr
            {
                vector<BigInt> coefficients;
                do {
                    BigInt coefficient = 1;
                    unsigned degree = 0;
                    if (at_digit()) {
                        coefficient = integer();
                        if (accept("*")) {
                            expect("x");
                            degree = accept("^") ? small() : 1;
                        }
                    }
                    else if (accept("x"))
                        degree = accept("^") ? small() : 1;
                    else
                        fail("expected a bound expression");
                    if (coefficients.size() <= degree)
                        coefficients.resize(degree + 1, BigInt(0));
                    coefficients[degree] += coefficient;
                } while (accept("+"));
                return polynomial_bound(std::move(coefficients));
            }
        };
    }

    auto constant_bound(Rational c) -> BoundPtr { return wrap({Constant{std::move(c)}}); }

    auto polynomial_bound(vector<BigInt> coefficients) -> BoundPtr
    {
        for (auto & c : coefficients)
            if (c < 0)
                throw DomainError("polynomial bounds need non-negative coefficients");
        while (! coefficients.empty() && coefficients.back() == 0)
            coefficients.pop_back();
        return wrap({Polynomial{std::move(coefficients)}});
    }

    auto monomial_bound(unsigned a) -> BoundPtr
    {
        vector<BigInt> c(a + 1, BigInt(0));
        c[a] = 1;
        return polynomial_bound(std::move(c));
    }

    auto exponential_bound(unsigned c) -> BoundPtr { return wrap({Exponential{c}}); }

    auto tabulated_bound(vector<Rational> values) -> BoundPtr
    {
        if (values.empty())
            throw DomainError("tabulated bound needs at least one value");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] < values[i - 1])
                throw DomainError("tabulated bound must be non-decreasing");
        return wrap({Tabulated{std::move(values)}});
    }

    auto star_bound(BoundPtr f) -> BoundPtr { return wrap({StarPower{std::move(f)}}); }
    auto poly_star_bound(unsigned a) -> BoundPtr { return wrap({PolyStar{a}}); }
    auto supermult_star_bound(BoundPtr f) -> BoundPtr { return wrap({SupermultStar{std::move(f)}}); }
    auto exp_star_bound(unsigned c) -> BoundPtr { return wrap({ExpStar{c}}); }
    auto kglue_bound(BoundPtr f, unsigned k) -> BoundPtr { return wrap({KGlueShift{std::move(f), k}}); }
    auto depth_power_bound(BoundPtr f, unsigned e) -> BoundPtr { return wrap({DepthPower{std::move(f), e}}); }

    auto eval(const BoundFn & f, unsigned n, unsigned bits) -> Interval
    {
        return std::visit(
            Overloaded{
                [&](const Constant & c) { return point(c.c); },
                [&](const Polynomial & p) {
                    BigInt value = 0;
                    for (auto i = p.coefficients.size(); i-- > 0;)
                        value = value * n + p.coefficients[i];
                    return point(Rational(value));
                },
                [&](const Exponential & e) { return point(pow2(static_cast<long>(e.c) * (static_cast<long>(n) - 1))); },
                [&](const Tabulated & t) {
                    if (n >= t.values.size())
                        throw DomainError("tabulated bound has no value at " + std::to_string(n));
                    return point(t.values[n]);
                },
                [&](const StarPower & s) {
                    if (n == 0)
                        return point(Rational(1));
                    return nonnegative_power(eval(*s.inner, n, bits), n, "star");
                },
                [&](const PolyStar & p) { return point(Rational(power(BigInt(n), 3 * p.a + 11))); },
                [&](const SupermultStar & s) {
                    if (n == 0)
                        return point(Rational(0));
                    return times(eval(*s.inner, n, bits), log_power(n, bits));
                },
                [&](const ExpStar & e) { return point(pow2(static_cast<long>(e.c + 1) * n)); },
                [&](const KGlueShift & s) {
                    auto v = eval(*s.inner, n, bits);
                    Rational shift = 2 * s.k * s.k - 1;
                    return Interval{v.lo + shift, v.hi + shift};
                },
                [&](const DepthPower & d) {
                    auto v = eval(*d.inner, n, bits);
                    return nonnegative_power(Interval{Rational(floor_of(v.lo)), Rational(floor_of(v.hi))}, d.e, "pow");
                }},
            f.node);
    }

    auto eval(const BoundPtr & f, unsigned n, unsigned bits) -> Interval
    {
        return eval(*f, n, bits);
    }

    auto floor_eval(const BoundPtr & f, unsigned n, unsigned bits) -> BigInt
    {
        return floor_of(eval(f, n, bits).lo);
    }

    auto check_supermultiplicative(const BoundPtr & f, unsigned n_max) -> bool
    {
        for (unsigned m = 1; m <= n_max; ++m)
            for (unsigned n = 1; m * n <= n_max; ++n) {
                auto a = eval(f, m), b = eval(f, n), c = eval(f, m * n);
                if (times(a, b).hi > c.lo)
                    return false;
            }
        return true;
    }

    auto check_monotone(const BoundPtr & f, unsigned n_max) -> bool
    {
        for (unsigned n = 0; n < n_max; ++n) {
            bool ok = false;
            for (unsigned bits = default_precision_bits; bits <= max_precision_bits && ! ok; bits *= 2) {
                auto a = eval(f, n, bits), b = eval(f, n + 1, bits);
                ok = a.hi <= b.lo;
                if (a.is_point() && b.is_point())
                    break;
            }
            if (! ok)
                return false;
        }
        return true;
    }

    auto format_bound(const BoundFn & f) -> string
    {
        return std::visit(
            Overloaded{
                [](const Constant & c) { return "const " + to_string(c.c); },
                [](const Polynomial & p) {
                    string out;
                    for (auto i = p.coefficients.size(); i-- > 0;) {
                        auto & c = p.coefficients[i];
                        if (c == 0)
                            continue;
                        string term;
                        if (i == 0)
                            term = c.str();
                        else {
                            term = c == 1 ? "x" : c.str() + "*x";
                            if (i > 1)
                                term += "^" + std::to_string(i);
                        }
                        out += (out.empty() ? "" : "+") + term;
                    }
                    return out.empty() ? string("0") : out;
                },
                [](const Exponential & e) {
                    return e.c == 1 ? string("2^(x-1)") : "2^(" + std::to_string(e.c) + "*(x-1))";
                },
                [](const Tabulated & t) {
                    string out = "table(";
                    for (std::size_t i = 0; i < t.values.size(); ++i)
                        out += (i ? "," : "") + to_string(t.values[i]);
                    return out + ")";
                },
                [](const StarPower & s) { return "star(" + format_bound(*s.inner) + ")"; },
                [](const PolyStar & p) { return "polystar(" + std::to_string(p.a) + ")"; },
                [](const SupermultStar & s) { return "supermultstar(" + format_bound(*s.inner) + ")"; },
                [](const ExpStar & e) { return "expstar(" + std::to_string(e.c) + ")"; },
                [](const KGlueShift & s) { return "kglue(" + format_bound(*s.inner) + "," + std::to_string(s.k) + ")"; },
                [](const DepthPower & d) { return "pow(" + format_bound(*d.inner) + "," + std::to_string(d.e) + ")"; }},
            f.node);
    }

    auto format_bound(const BoundPtr & f) -> string
    {
        return format_bound(*f);
    }

    auto parse_bound(const string & text) -> BoundPtr
    {
        return Parser(text).parse();
    }

    auto verdict_name(Verdict v) -> string
    {
        switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive-precision";
        }
        return "?";
    }

    auto check_bound(const BoundPtr & f, unsigned omega, std::size_t colours, unsigned start_bits, unsigned max_bits)
        -> BoundCheck
    {
        BoundCheck result;
        Rational used(static_cast<unsigned long>(colours));
        for (unsigned bits = std::max(start_bits, 2u); bits <= max_bits; bits *= 2) {
            result.value = eval(f, omega, bits);
            result.precision_bits = bits;
            if (used <= result.value.lo) {
                result.verdict = Verdict::pass;
                return result;
            }
            if (used > result.value.hi) {
                result.verdict = Verdict::fail;
                return result;
            }
        }
        result.verdict = Verdict::inconclusive;
        return result;
    }

    auto check_certificate(const Certificate & cert, unsigned start_bits, unsigned max_bits) -> Verdict
    {
        return check_bound(cert.bound, cert.omega, cert.colors_used, start_bits, max_bits).verdict;
    }

    auto certify(Certificate & cert, unsigned start_bits) -> void
    {
        auto r = check_bound(cert.bound, cert.omega, cert.colors_used, start_bits);
        cert.verdict = r.verdict;
        cert.bound_value = r.value;
        cert.precision_bits = r.precision_bits;
    }

    auto certificate_json(const Certificate & cert) -> nlohmann::json
    {
        nlohmann::json j;
        j["bound"] = format_bound(cert.bound);
        j["method"] = cert.method;
        j["omega"] = cert.omega;
        j["colors_used"] = cert.colors_used;
        j["verdict"] = verdict_name(cert.verdict);
        j["bound_interval"] = {{"lo", to_string(cert.bound_value.lo)}, {"hi", to_string(cert.bound_value.hi)}};
        j["precision_bits"] = cert.precision_bits;
        j["trace"] = cert.trace.is_null() ? nlohmann::json::object() : cert.trace;
        return j;
    }
}

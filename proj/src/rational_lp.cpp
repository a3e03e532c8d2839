#include <chibound/rational_lp.hpp>
#include <chibound/errors.hpp>

#include <optional>

using std::size_t;
using std::vector;

namespace chibound
{
    auto solve_packing_lp(const PackingLp & lp, std::uint64_t max_pivots) -> LpSolution
    {
        auto m = lp.a.size(), n = lp.c.size();
        if (lp.b.size() != m)
            throw DomainError("packing LP: row count and right-hand side disagree");
        for (auto & row : lp.a)
            if (row.size() != n)
                throw DomainError("packing LP: ragged constraint matrix");
        for (auto & rhs : lp.b)
            if (rhs < 0)
                throw DomainError("packing LP: negative right-hand side");

        // Columns: n structural, m slack, then the right-hand side.
        auto width = n + m + 1, rhs = n + m;
        vector<vector<Rational>> t(m + 1, vector<Rational>(width, Rational(0)));
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < n; ++j)
                t[i][j] = lp.a[i][j];
            t[i][n + i] = 1;
            t[i][rhs] = lp.b[i];
        }
        auto & z = t[m];
        for (size_t j = 0; j < n; ++j)
            z[j] = -lp.c[j];

        vector<size_t> basis(m);
        for (size_t i = 0; i < m; ++i)
            basis[i] = n + i;

        LpSolution result;
        while (true) {
            std::optional<size_t> entering;
            for (size_t j = 0; j < n + m; ++j)
                if (z[j] < 0) {
                    entering = j;
                    break;
                }
            if (! entering)
                break;
            auto e = *entering;

            std::optional<size_t> leaving;
            Rational best_ratio;
            for (size_t i = 0; i < m; ++i) {
                if (t[i][e] <= 0)
                    continue;
                Rational ratio = t[i][rhs] / t[i][e];
                if (! leaving || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[*leaving])) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
            if (! leaving)
                throw DomainError("packing LP is unbounded");

            if (++result.pivots > max_pivots)
                throw BudgetExceeded("fractional_chromatic_number");

            auto r = *leaving;
            Rational pivot = t[r][e];
            for (auto & x : t[r])
                if (x != 0)
                    x /= pivot;
            for (size_t i = 0; i <= m; ++i) {
                if (i == r || t[i][e] == 0)
                    continue;
                Rational factor = t[i][e];
                for (size_t j = 0; j < width; ++j)
                    if (t[r][j] != 0)
                        t[i][j] -= factor * t[r][j];
            }
            basis[r] = e;
        }

        result.value = z[rhs];
        result.primal.assign(n, Rational(0));
        for (size_t i = 0; i < m; ++i)
            if (basis[i] < n)
                result.primal[basis[i]] = t[i][rhs];
        result.dual.assign(m, Rational(0));
        for (size_t i = 0; i < m; ++i)
            result.dual[i] = z[n + i];
        return result;
    }
}

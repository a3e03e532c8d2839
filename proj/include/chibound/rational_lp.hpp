#pragma once

#include <chibound/numeric.hpp>

#include <cstdint>
#include <vector>

namespace chibound
{
    /// maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.
    struct PackingLp
    {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        std::vector<Rational> c;
    };

    struct LpSolution
    {
        Rational value;
        std::vector<Rational> primal; ///< one entry per column
        std::vector<Rational> dual;   ///< one entry per row; feasible for min b.y, A^T y >= c, y >= 0
        std::uint64_t pivots = 0;
    };

    /// Exact tableau simplex with Bland's rule. The slack basis is feasible
    /// because b >= 0, so there is no phase one. Throws DomainError if the
    /// problem is unbounded or malformed, BudgetExceeded past max_pivots.
    auto solve_packing_lp(const PackingLp & lp, std::uint64_t max_pivots) -> LpSolution;
}

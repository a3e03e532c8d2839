#pragma once

#include <chibound/graph.hpp>
#include <chibound/numeric.hpp>

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace chibound
{
    inline constexpr std::uint64_t default_step_budget = 10'000'000;

    /// Budget taken from CHIBOUND_STEP_BUDGET when set, else the default.
    /// A value that is not a positive integer is a DomainError.
    auto step_budget_from_environment() -> std::uint64_t;

    auto maximum_clique(const Graph & g, std::uint64_t budget = default_step_budget) -> VertexSet;
    auto clique_number(const Graph & g, std::uint64_t budget = default_step_budget) -> unsigned;

    /// Maximum total weight of a clique; weights are keyed by vertex id.
    auto max_weight_clique(const Graph & g, const std::map<VertexId, unsigned> & weights,
            std::uint64_t budget = default_step_budget) -> unsigned;

    struct ChromaticResult
    {
        unsigned chi = 0;
        Coloring coloring; ///< optimal, colours 0..chi-1
    };

    /// Exact DSATUR branch and bound, clique lower bound, greedy upper bound.
    auto optimal_coloring(const Graph & g, std::uint64_t budget = default_step_budget) -> ChromaticResult;
    auto chromatic_number(const Graph & g, std::uint64_t budget = default_step_budget) -> unsigned;

    /// All inclusion-maximal stable sets, sorted.
    auto maximal_stable_sets(const Graph & g, std::uint64_t budget = default_step_budget) -> std::vector<VertexSet>;

    struct FractionalColoring
    {
        Rational value;
        std::vector<std::pair<VertexSet, Rational>> stable_set_weights; ///< covers every vertex with weight >= 1
        std::map<VertexId, Rational> clique_weights;                   ///< weight <= 1 on every stable set
    };

    /// Solves the stable-set covering LP exactly. The returned primal and dual
    /// solutions have equal value, so each certifies the other.
    auto fractional_coloring(const Graph & g, std::uint64_t budget = default_step_budget) -> FractionalColoring;
    auto fractional_chromatic_number(const Graph & g, std::uint64_t budget = default_step_budget) -> Rational;

    struct CutsetResult
    {
        bool found = false;
        VertexSet cutset;
        std::pair<VertexSet, VertexSet> sides;
    };

    /// Smallest vertex set of size <= limit whose removal disconnects g;
    /// lexicographically least among the minimum ones.
    auto min_vertex_cutset(const Graph & g, unsigned limit, std::uint64_t budget = default_step_budget) -> CutsetResult;
}

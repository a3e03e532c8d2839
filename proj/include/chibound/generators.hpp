#pragma once

#include <chibound/graph.hpp>
#include <chibound/optree.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace chibound
{
    /// SplitMix64. Portable and fully determined by the seed.
    class SplitMix64
    {
    public:
        explicit SplitMix64(std::uint64_t seed) : _state(seed) {}

        auto next() -> std::uint64_t;

        /// Uniform in [0, n); n must be positive.
        auto below(std::uint64_t n) -> std::uint64_t;

        /// Uniform in [lo, hi].
        auto between(std::uint64_t lo, std::uint64_t hi) -> std::uint64_t { return lo + below(hi - lo + 1); }

    private:
        std::uint64_t _state;
    };

    struct NodeMix
    {
        unsigned leaf = 1;
        unsigned substitute = 0;
        unsigned clique_glue = 0;
        unsigned k_glue = 0;
    };

    /// Leaf pool identifiers: complete, edgeless, path, cycle, even-cycle.
    struct GenConfig
    {
        std::uint64_t seed = 0;
        std::size_t max_vertices = 20;
        unsigned max_depth = 3;
        NodeMix mix;
        std::vector<std::string> leaf_pool{"complete"};
        std::vector<std::string> base_pool{"complete", "edgeless"};
        std::size_t min_leaf_order = 1;
        std::size_t max_leaf_order = 4;
        std::size_t max_base_order = 4;
        unsigned k = 1;
    };

    /// M applied t times to K2; 3 * 2^t - 1 vertices, at most 100.
    auto mycielski_tower(unsigned t) -> Graph;

    /// t operator applications starting from K2, O1 first. O1 applies M when
    /// chi is odd and O2 when chi is even; otherwise the graph is unchanged.
    /// chi is tracked through chi(M(G)) = chi(G) + 1.
    auto alternate_o1_o2(unsigned t) -> Graph;

    /// F_1 = f and F_(i+1) = f[F_i]; at most 100 vertices.
    auto lex_power(const Graph & f, unsigned i) -> Graph;

    /// Graph of the named family with the given ids, in order. Throws
    /// DomainError for an unknown identifier.
    auto pool_graph(const std::string & family, const std::vector<VertexId> & ids) -> Graph;

    /// A validate-passing tree with at most cfg.max_vertices realized vertices.
    auto random_optree(const GenConfig & cfg) -> OpTree;

    /// Substitute-only trees over complete leaves and complete or edgeless
    /// bases; the realizations are cographs.
    auto random_cograph_tree(std::uint64_t seed, std::size_t max_vertices = 20) -> OpTree;

    /// Substitute trees over perfect leaves and bases with clique number in
    /// [4, 12] and substitution depth at least 3.
    auto random_poly_tree(std::uint64_t seed) -> OpTree;

    /// Leaf and KGlue trees of complete graphs K3..K5 with every |shared| <= k.
    auto random_kglue_tree(std::uint64_t seed, unsigned k) -> OpTree;

    /// Leaf, CliqueGlue and KGlue trees with at least one CliqueGlue node.
    auto random_glue_tree(std::uint64_t seed) -> OpTree;

    /// Leaf, Substitute and CliqueGlue trees with at most max_vertices vertices.
    auto random_reducible_tree(std::uint64_t seed, std::size_t max_vertices = 18) -> OpTree;
}

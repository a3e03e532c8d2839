#pragma once

#include <chibound/bounds.hpp>
#include <chibound/graph.hpp>
#include <chibound/optree.hpp>

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chibound
{
    struct SynthesisOptions
    {
        std::uint64_t budget = default_step_budget;
        unsigned precision_bits = default_precision_bits;
    };

    /// Clique number of realize(t), computed bottom-up: a substitution is a
    /// maximum weight clique of its base weighted by the children.
    auto tree_clique_number(const OpTree & t, std::uint64_t budget = default_step_budget) -> unsigned;

    struct SynthesisResult
    {
        Coloring coloring;
        Certificate certificate;
    };

    /// Product colouring (base colour, child colour) along the substitution
    /// tree. Certifies against floor(f(omega))^(d+1).
    auto color_by_depth(const OpTree & t, const BoundPtr & f, const SynthesisOptions & opts = {}) -> SynthesisResult;

    struct PolyBlock
    {
        VertexId vertex;
        unsigned omega_i = 0;
        unsigned s_i = 0;
        Rational p;                      ///< 1 - omega_i / omega
        std::vector<unsigned> neighbour_buckets;
        std::size_t block_colors = 0;
        std::size_t neighbour_bucket_colors = 0;
        std::size_t total = 0;           ///< the P of the ledger
    };

    struct PolyNode
    {
        std::string path;
        unsigned omega = 0;
        unsigned a = 0;
        int depth = 0;
        bool fallback = false;           ///< coloured by the depth product instead
        unsigned m = 0;                  ///< alpha^m = omega/2
        std::map<VertexId, unsigned> child_omega;
        std::map<VertexId, unsigned> buckets;
        std::vector<std::size_t> bucket_colors;  ///< index j = 1..m+1; slot 0 unused
        std::vector<unsigned> bucket_clique;     ///< index j = 1..m; slot 0 unused
        std::size_t disjoint_total = 0;
        BigInt g_value;
        std::vector<PolyBlock> blocks;
        std::size_t colors = 0;
    };

    struct PolyTrace
    {
        std::vector<PolyNode> nodes;
    };

    auto to_json(const PolyTrace & t) -> nlohmann::json;

    struct PolyResult
    {
        Coloring coloring;
        Certificate certificate;
        PolyTrace trace;
    };

    /// Smallest m >= 1 with (5/4)^m <= omega/2 <= (3/2)^m; throws DomainError
    /// for omega < 4.
    auto poly_alpha_exponent(unsigned omega) -> unsigned;

    /// Bucket index of a child with clique number omega_i; 0 for omega_i > omega/2,
    /// m+1 for omega_i = 1.
    auto poly_bucket(unsigned omega, unsigned m, unsigned omega_i) -> unsigned;

    /// Least s >= 1 with omega/(2 alpha^s) < omega - omega_i.
    auto poly_block_reach(unsigned omega, unsigned m, unsigned omega_i) -> unsigned;

    /// Bucket colouring for leaves bounded by x^A; certifies against x^(3A+11).
    auto color_poly(const OpTree & t, unsigned a, const SynthesisOptions & opts = {}) -> PolyResult;

    struct SupermultBucket
    {
        unsigned j = 0;
        std::vector<VertexId> vertices;
        unsigned clique = 0;
        std::size_t colors = 0;
        Interval bound;                  ///< f(floor(omega/j)) g(j)
    };

    struct SupermultNode
    {
        std::string path;
        unsigned omega = 0;
        std::vector<VertexId> large;     ///< children with omega_i > omega/2
        std::size_t large_colors = 0;
        Interval large_bound;            ///< g(omega - 1)
        std::vector<SupermultBucket> buckets;
        std::size_t colors = 0;
        Interval g_value;
    };

    struct SupermultTrace
    {
        std::vector<SupermultNode> nodes;
    };

    auto to_json(const SupermultTrace & t) -> nlohmann::json;

    struct SupermultResult
    {
        Coloring coloring;
        Certificate certificate;
        SupermultTrace trace;
    };

    /// Throws DomainError if f fails the supermultiplicativity sweep and
    /// CertificationError if a bucket or the whole exceeds its ledger bound.
    auto color_supermult(const OpTree & t, const BoundPtr & f, const SynthesisOptions & opts = {}) -> SupermultResult;

    /// Joins colourings of the two sides of a clique glue into one using
    /// max(|c1|, |c2|) colours. The side with fewer colours is renamed.
    auto merge_on_clique(const Graph & g, const Coloring & c1, const Coloring & c2, const VertexSet & shared) -> Coloring;

    struct ColoringConstraint
    {
        std::set<Color> palette;
        Coloring precoloring;                            ///< keys form K
        std::map<VertexId, std::set<Color>> forbidden;   ///< absent means empty
    };

    /// k |K| + sum over v outside K of |F(v)|.
    auto constraint_budget(const ColoringConstraint & c, unsigned k) -> std::size_t;

    /// True if c extends the precolouring and avoids every forbidden colour.
    auto is_appropriate(const Coloring & c, const ColoringConstraint & constraint) -> bool;

    struct KGlueStep
    {
        std::string path;
        bool leaf = false;
        std::size_t budget = 0;
        std::size_t precolored = 0;
        // glue steps
        std::string heavy;
        std::size_t heavy_weight = 0, light_weight = 0;
        std::size_t heavy_budget = 0, light_budget = 0;
        // leaf steps
        std::size_t free_colors = 0, used_colors = 0;
    };

    struct KGlueTrace
    {
        unsigned k = 0;
        std::size_t palette = 0;
        std::vector<KGlueStep> steps;
    };

    auto to_json(const KGlueTrace & t) -> nlohmann::json;

    struct KGlueResult
    {
        Coloring coloring;
        Certificate certificate;
        KGlueTrace trace;
    };

    /// Constraint propagation through the KGlue nodes. CliqueGlue nodes are
    /// first pushed below the KGlue nodes; KGlue-free subtrees act as leaves.
    /// k is raised to the largest k in the tree.
    auto color_kglue(const OpTree & t, const BoundPtr & f, const std::optional<ColoringConstraint> & constraint = std::nullopt,
            unsigned k = 0, const SynthesisOptions & opts = {}) -> KGlueResult;

    struct Reduction
    {
        OpTree witness_tree;     ///< Leaf and Substitute nodes only
        Graph witness;
        std::map<VertexId, VertexId> embedding;
    };

    /// At every clique glue keeps the side of larger chromatic number.
    auto reduce_to_base(const OpTree & t, std::uint64_t budget = default_step_budget) -> Reduction;
}

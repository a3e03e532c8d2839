#pragma once

#include <chibound/errors.hpp>
#include <chibound/graph.hpp>
#include <chibound/oracle.hpp>

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace chibound
{
    struct OpNode;

    /// Construction trees are immutable and share subtrees freely.
    using OpTree = std::shared_ptr<const OpNode>;

    struct LeafNode
    {
        Graph graph;
        std::string class_tag;
    };

    /// Children are keyed by base vertex. A child vertex v substituted for
    /// base vertex b is named "b/v" in the realized graph.
    struct SubstituteNode
    {
        Graph base;
        std::map<VertexId, OpTree> children;
    };

    struct CliqueGlueNode
    {
        OpTree left, right;
        VertexSet shared;
    };

    struct KGlueNode
    {
        unsigned k = 1;
        OpTree left, right;
        VertexSet shared;
    };

    struct OpNode
    {
        std::variant<LeafNode, SubstituteNode, CliqueGlueNode, KGlueNode> node;
    };

    auto make_leaf(Graph g, std::string class_tag = "base") -> OpTree;
    auto make_substitute(Graph base, std::map<VertexId, OpTree> children) -> OpTree;
    auto make_clique_glue(OpTree left, OpTree right, VertexSet shared) -> OpTree;
    auto make_k_glue(unsigned k, OpTree left, OpTree right, VertexSet shared) -> OpTree;

    auto is_leaf(const OpTree & t) -> bool;
    auto is_substitute(const OpTree & t) -> bool;
    auto is_clique_glue(const OpTree & t) -> bool;
    auto is_k_glue(const OpTree & t) -> bool;

    struct NodeKinds
    {
        bool leaf = false, substitute = false, clique_glue = false, k_glue = false;
    };

    /// Which node kinds occur anywhere in t.
    auto node_kinds(const OpTree & t) -> NodeKinds;

    /// Largest k over all KGlue nodes, 0 if there are none.
    auto max_k(const OpTree & t) -> unsigned;

    /// True if some CliqueGlue node has a KGlue node below it.
    auto clique_glue_above_k_glue(const OpTree & t) -> bool;

    auto glue_node_count(const OpTree & t) -> std::size_t;

    struct Issue
    {
        std::string path;      ///< "$", "$.left", "$.children[v]", ...
        std::string invariant; ///< short machine-readable name
        std::string message;
    };

    using Diagnostics = std::vector<Issue>;

    class ValidationError : public DomainError
    {
    public:
        explicit ValidationError(Diagnostics d);
        auto diagnostics() const -> const Diagnostics & { return _diagnostics; }

    private:
        Diagnostics _diagnostics;
    };

    auto validate(const OpTree & t) -> Diagnostics;

    /// Throws ValidationError when validate reports anything.
    auto realize(const OpTree & t) -> Graph;

    /// Depth of this representation: -1 for an empty leaf, 0 for other leaves,
    /// and a child under a non-isolated base vertex counts one level deeper.
    auto substitution_depth(const OpTree & t) -> int;

    /// Pushes every CliqueGlue below the KGlue nodes. The result realizes the
    /// identical graph.
    auto normalize_glue_order(const OpTree & t) -> OpTree;

    /// KGlue tree of induced subgraphs of g whose leaves (tag "piece") are
    /// complete or (k+1)-connected.
    auto decompose_small_cutsets(const Graph & g, unsigned k, std::uint64_t budget = default_step_budget) -> OpTree;

    // Tree files hold a single JSON document; see README for the node shapes.
    auto parse_tree(const std::string & text) -> OpTree;
    auto read_tree(std::istream & in) -> OpTree;
    auto format_tree(const OpTree & t) -> std::string;
}

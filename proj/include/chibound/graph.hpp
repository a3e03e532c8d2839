#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chibound
{
    /// Vertex labels are opaque printable strings without whitespace.
    /// Composite constructions build hierarchical ids of the form "parent/child".
    using VertexId = std::string;
    using VertexSet = std::set<VertexId>;
    using Edge = std::pair<VertexId, VertexId>;

    using Color = std::int64_t;
    using Coloring = std::map<VertexId, Color>;

    /// Immutable simple graph. Vertices are kept sorted, so index order equals
    /// lexicographic id order.
    class Graph
    {
    public:
        Graph() = default;

        /// Throws DomainError on duplicate ids, bad ids, self-loops, or edges
        /// naming unknown vertices. Repeated edges are merged.
        Graph(std::vector<VertexId> vertices, const std::vector<Edge> & edges);

        auto order() const -> std::size_t { return _ids.size(); }
        auto size() const -> std::size_t { return _edge_count; }
        auto empty() const -> bool { return _ids.empty(); }

        auto vertices() const -> const std::vector<VertexId> & { return _ids; }
        auto vertex_set() const -> VertexSet;
        auto edges() const -> std::vector<Edge>;

        auto contains(const VertexId & v) const -> bool;
        auto index_of(const VertexId & v) const -> std::optional<std::size_t>;
        auto id(std::size_t i) const -> const VertexId & { return _ids[i]; }

        auto adjacent(std::size_t i, std::size_t j) const -> bool { return _matrix[i * _ids.size() + j]; }
        auto adjacent(const VertexId & u, const VertexId & v) const -> bool;
        auto neighbours(std::size_t i) const -> const std::vector<std::size_t> & { return _adj[i]; }
        auto degree(std::size_t i) const -> std::size_t { return _adj[i].size(); }

        auto operator==(const Graph & other) const -> bool;

    private:
        std::vector<VertexId> _ids;
        std::vector<std::vector<std::size_t>> _adj;
        std::vector<bool> _matrix;
        std::size_t _edge_count = 0;
    };

    auto is_valid_vertex_id(std::string_view id) -> bool;

    // Small named graphs; ids are prefix + decimal index.
    auto complete_graph(std::size_t n, const std::string & prefix = "") -> Graph;
    auto edgeless_graph(std::size_t n, const std::string & prefix = "") -> Graph;
    auto cycle_graph(std::size_t n, const std::string & prefix = "") -> Graph;
    auto path_graph(std::size_t n, const std::string & prefix = "") -> Graph;
    auto complete_on(const VertexSet & ids) -> Graph;

    auto induced_subgraph(const Graph & g, const VertexSet & s) -> Graph;
    auto delete_vertices(const Graph & g, const VertexSet & s) -> Graph;
    auto disjoint_union(const Graph & g1, const Graph & g2) -> Graph;

    /// Adds shadows "w/<v>" complete to N(v), an apex "w" complete to the
    /// shadows, and renames each original v to "v/<v>".
    auto mycielskian(const Graph & g) -> Graph;

    /// (u1,v1) ~ (u2,v2) iff u1 ~ u2 in f, or u1 = u2 and v1 ~ v2 in h.
    /// The pair (u,v) is named "u/v".
    auto lex_product(const Graph & f, const Graph & h) -> Graph;

    /// Every id v becomes prefix + "/" + v.
    auto with_prefix(const Graph & g, const std::string & prefix) -> Graph;
    auto relabel(const Graph & g, const std::map<VertexId, VertexId> & mapping) -> Graph;

    auto is_homogeneous(const Graph & g, const VertexSet & s) -> bool;
    auto is_clique(const Graph & g, const VertexSet & s) -> bool;
    auto is_stable(const Graph & g, const VertexSet & s) -> bool;
    auto is_complete(const Graph & g) -> bool;
    auto isolated_vertices(const Graph & g) -> VertexSet;
    auto connected_components(const Graph & g) -> std::vector<VertexSet>;

    /// Throws DomainError if some vertex of g is uncoloured.
    auto is_proper(const Graph & g, const Coloring & c) -> bool;
    auto colors_used(const Coloring & c) -> std::size_t;

    /// Renumbers colours to 0..c-1 in order of first appearance (by vertex id).
    auto compact(const Coloring & c) -> Coloring;
    auto restrict_to(const Coloring & c, const VertexSet & s) -> Coloring;

    // Text format: "p <n> <m>", then "v <id>" lines, then "e <id> <id>" lines.
    auto read_graph(std::istream & in) -> Graph;
    auto parse_graph(const std::string & text) -> Graph;
    auto write_graph(std::ostream & out, const Graph & g) -> void;
    auto format_graph(const Graph & g) -> std::string;

    // Colouring format: "<vertex-id> <color>" lines sorted by vertex id.
    auto read_coloring(std::istream & in) -> Coloring;
    auto write_coloring(std::ostream & out, const Coloring & c) -> void;
}

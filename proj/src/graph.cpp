#include <chibound/graph.hpp>
#include <chibound/errors.hpp>

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

using std::map;
using std::size_t;
using std::string;
using std::vector;

namespace chibound
{
    auto is_valid_vertex_id(std::string_view id) -> bool
    {
        if (id.empty())
            return false;
        return std::none_of(id.begin(), id.end(), [](unsigned char ch) { return std::isspace(ch) || ! std::isprint(ch); });
    }

    Graph::Graph(vector<VertexId> vertices, const vector<Edge> & edges) :
        _ids(std::move(vertices))
    {
        for (auto & v : _ids)
            if (! is_valid_vertex_id(v))
                throw DomainError("invalid vertex id '" + v + "'");

        std::sort(_ids.begin(), _ids.end());
        if (auto dup = std::adjacent_find(_ids.begin(), _ids.end()); dup != _ids.end())
            throw DomainError("duplicate vertex id '" + *dup + "'");

        auto n = _ids.size();
        _matrix.assign(n * n, false);
        _adj.assign(n, {});

        for (auto & [u, v] : edges) {
            auto i = index_of(u), j = index_of(v);
            if (! i || ! j)
                throw DomainError("edge " + u + " " + v + " names a vertex outside the graph");
            if (*i == *j)
                throw DomainError("self-loop at " + u);
            if (! _matrix[*i * n + *j]) {
                _matrix[*i * n + *j] = _matrix[*j * n + *i] = true;
                _adj[*i].push_back(*j);
                _adj[*j].push_back(*i);
                ++_edge_count;
            }
        }

        for (auto & a : _adj)
            std::sort(a.begin(), a.end());
    }

    auto Graph::vertex_set() const -> VertexSet
    {
        return VertexSet(_ids.begin(), _ids.end());
    }

    auto Graph::edges() const -> vector<Edge>
    {
        vector<Edge> result;
        result.reserve(_edge_count);
        for (size_t i = 0; i < _ids.size(); ++i)
            for (auto j : _adj[i])
                if (i < j)
                    result.emplace_back(_ids[i], _ids[j]);
        return result;
    }

    auto Graph::contains(const VertexId & v) const -> bool
    {
        return std::binary_search(_ids.begin(), _ids.end(), v);
    }

    auto Graph::index_of(const VertexId & v) const -> std::optional<size_t>
    {
        auto it = std::lower_bound(_ids.begin(), _ids.end(), v);
        if (it == _ids.end() || *it != v)
            return std::nullopt;
        return static_cast<size_t>(it - _ids.begin());
    }

    auto Graph::adjacent(const VertexId & u, const VertexId & v) const -> bool
    {
        auto i = index_of(u), j = index_of(v);
        return i && j && adjacent(*i, *j);
    }

    auto Graph::operator==(const Graph & other) const -> bool
    {
        return _ids == other._ids && _matrix == other._matrix;
    }

    namespace
    {
        auto numbered(size_t n, const string & prefix) -> vector<VertexId>
        {
            vector<VertexId> ids;
            for (size_t i = 0; i < n; ++i)
                ids.push_back(prefix + std::to_string(i));
            return ids;
        }

        auto require_subset(const Graph & g, const VertexSet & s, const char * what) -> void
        {
            for (auto & v : s)
                if (! g.contains(v))
                    throw DomainError(string(what) + ": vertex '" + v + "' is not in the graph");
        }
    }

    auto complete_graph(size_t n, const string & prefix) -> Graph
    {
        auto ids = numbered(n, prefix);
        vector<Edge> edges;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                edges.emplace_back(ids[i], ids[j]);
        return Graph(ids, edges);
    }

    auto edgeless_graph(size_t n, const string & prefix) -> Graph
    {
        return Graph(numbered(n, prefix), {});
    }

    auto cycle_graph(size_t n, const string & prefix) -> Graph
    {
        if (n < 3)
            throw DomainError("a cycle needs at least three vertices");
        auto ids = numbered(n, prefix);
        vector<Edge> edges;
        for (size_t i = 0; i < n; ++i)
            edges.emplace_back(ids[i], ids[(i + 1) % n]);
        return Graph(ids, edges);
    }

    auto path_graph(size_t n, const string & prefix) -> Graph
    {
        auto ids = numbered(n, prefix);
        vector<Edge> edges;
        for (size_t i = 0; i + 1 < n; ++i)
            edges.emplace_back(ids[i], ids[i + 1]);
        return Graph(ids, edges);
    }

    auto complete_on(const VertexSet & ids) -> Graph
    {
        vector<VertexId> vs(ids.begin(), ids.end());
        vector<Edge> edges;
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j)
                edges.emplace_back(vs[i], vs[j]);
        return Graph(vs, edges);
    }

    auto induced_subgraph(const Graph & g, const VertexSet & s) -> Graph
    {
        require_subset(g, s, "induced_subgraph");
        vector<VertexId> vs(s.begin(), s.end());
        vector<size_t> idx;
        for (auto & v : vs)
            idx.push_back(*g.index_of(v));
        vector<Edge> edges;
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = a + 1; b < idx.size(); ++b)
                if (g.adjacent(idx[a], idx[b]))
                    edges.emplace_back(vs[a], vs[b]);
        return Graph(vs, edges);
    }

    auto delete_vertices(const Graph & g, const VertexSet & s) -> Graph
    {
        VertexSet keep;
        for (auto & v : g.vertices())
            if (! s.contains(v))
                keep.insert(v);
        return induced_subgraph(g, keep);
    }

    auto disjoint_union(const Graph & g1, const Graph & g2) -> Graph
    {
        for (auto & v : g1.vertices())
            if (g2.contains(v))
                throw DomainError("disjoint_union: vertex '" + v + "' occurs in both graphs");
        auto vs = g1.vertices();
        vs.insert(vs.end(), g2.vertices().begin(), g2.vertices().end());
        auto edges = g1.edges();
        auto e2 = g2.edges();
        edges.insert(edges.end(), e2.begin(), e2.end());
        return Graph(vs, edges);
    }

    auto mycielskian(const Graph & g) -> Graph
    {
        if (g.empty())
            throw DomainError("mycielskian: the graph must be non-empty");

        auto orig = [](const VertexId & v) { return "v/" + v; };
        auto shadow = [](const VertexId & v) { return "w/" + v; };
        const VertexId apex = "w";

        vector<VertexId> vs;
        vector<Edge> edges;
        for (auto & v : g.vertices()) {
            vs.push_back(orig(v));
            vs.push_back(shadow(v));
            edges.emplace_back(shadow(v), apex);
        }
        vs.push_back(apex);

        for (auto & [u, v] : g.edges()) {
            edges.emplace_back(orig(u), orig(v));
            edges.emplace_back(shadow(u), orig(v));
            edges.emplace_back(orig(u), shadow(v));
        }
        return Graph(vs, edges);
    }

    auto lex_product(const Graph & f, const Graph & h) -> Graph
    {
        if (f.empty() || h.empty())
            throw DomainError("lex_product: both factors must be non-empty");

        auto pair_id = [](const VertexId & u, const VertexId & v) { return u + "/" + v; };

        vector<VertexId> vs;
        for (auto & u : f.vertices())
            for (auto & v : h.vertices())
                vs.push_back(pair_id(u, v));

        vector<Edge> edges;
        for (auto & [u1, u2] : f.edges())
            for (auto & v1 : h.vertices())
                for (auto & v2 : h.vertices())
                    edges.emplace_back(pair_id(u1, v1), pair_id(u2, v2));
        for (auto & u : f.vertices())
            for (auto & [v1, v2] : h.edges())
                edges.emplace_back(pair_id(u, v1), pair_id(u, v2));
        return Graph(vs, edges);
    }

    auto with_prefix(const Graph & g, const string & prefix) -> Graph
    {
        map<VertexId, VertexId> m;
        for (auto & v : g.vertices())
            m.emplace(v, prefix + "/" + v);
        return relabel(g, m);
    }

    auto relabel(const Graph & g, const map<VertexId, VertexId> & mapping) -> Graph
    {
        auto rename = [&](const VertexId & v) {
            auto it = mapping.find(v);
            return it == mapping.end() ? v : it->second;
        };
        vector<VertexId> vs;
        for (auto & v : g.vertices())
            vs.push_back(rename(v));
        vector<Edge> edges;
        for (auto & [u, v] : g.edges())
            edges.emplace_back(rename(u), rename(v));
        return Graph(vs, edges);
    }

    auto is_homogeneous(const Graph & g, const VertexSet & s) -> bool
    {
        if (s.empty())
            throw DomainError("is_homogeneous: the set must be non-empty");
        require_subset(g, s, "is_homogeneous");

        vector<size_t> inside;
        for (auto & v : s)
            inside.push_back(*g.index_of(v));

        for (size_t x = 0; x < g.order(); ++x) {
            if (s.contains(g.id(x)))
                continue;
            size_t hits = 0;
            for (auto i : inside)
                hits += g.adjacent(x, i) ? 1 : 0;
            if (hits != 0 && hits != inside.size())
                return false;
        }
        return true;
    }

    auto is_clique(const Graph & g, const VertexSet & s) -> bool
    {
        require_subset(g, s, "is_clique");
        for (auto a = s.begin(); a != s.end(); ++a)
            for (auto b = std::next(a); b != s.end(); ++b)
                if (! g.adjacent(*a, *b))
                    return false;
        return true;
    }

    auto is_stable(const Graph & g, const VertexSet & s) -> bool
    {
        require_subset(g, s, "is_stable");
        for (auto a = s.begin(); a != s.end(); ++a)
            for (auto b = std::next(a); b != s.end(); ++b)
                if (g.adjacent(*a, *b))
                    return false;
        return true;
    }

    auto is_complete(const Graph & g) -> bool
    {
        auto n = g.order();
        return g.size() == n * (n - (n > 0 ? 1 : 0)) / 2;
    }

    auto isolated_vertices(const Graph & g) -> VertexSet
    {
        VertexSet result;
        for (size_t i = 0; i < g.order(); ++i)
            if (g.degree(i) == 0)
                result.insert(g.id(i));
        return result;
    }

    auto connected_components(const Graph & g) -> vector<VertexSet>
    {
        vector<VertexSet> result;
        vector<bool> seen(g.order(), false);
        for (size_t start = 0; start < g.order(); ++start) {
            if (seen[start])
                continue;
            VertexSet comp;
            vector<size_t> stack{start};
            seen[start] = true;
            while (! stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                comp.insert(g.id(v));
                for (auto w : g.neighbours(v))
                    if (! seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
            }
            result.push_back(std::move(comp));
        }
        return result;
    }

    auto is_proper(const Graph & g, const Coloring & c) -> bool
    {
        for (auto & v : g.vertices())
            if (! c.contains(v))
                throw DomainError("is_proper: vertex '" + v + "' has no colour");
        for (auto & [u, v] : g.edges())
            if (c.at(u) == c.at(v))
                return false;
        return true;
    }

    auto colors_used(const Coloring & c) -> size_t
    {
        std::set<Color> seen;
        for (auto & [_, col] : c)
            seen.insert(col);
        return seen.size();
    }

    auto compact(const Coloring & c) -> Coloring
    {
        map<Color, Color> renumber;
        Coloring result;
        for (auto & [v, col] : c) {
            auto [it, _] = renumber.try_emplace(col, static_cast<Color>(renumber.size()));
            result.emplace(v, it->second);
        }
        return result;
    }

    auto restrict_to(const Coloring & c, const VertexSet & s) -> Coloring
    {
        Coloring result;
        for (auto & v : s)
            if (auto it = c.find(v); it != c.end())
                result.emplace(v, it->second);
        return result;
    }

    auto read_graph(std::istream & in) -> Graph
    {
        string line;
        auto next_line = [&](string & out) {
            while (std::getline(in, out)) {
                auto first = out.find_first_not_of(" \t\r");
                if (first == string::npos || out[first] == 'c')
                    continue;
                return true;
            }
            return false;
        };

        if (! next_line(line))
            throw ParseError("graph file: missing 'p <n> <m>' header");

        std::istringstream header(line);
        string tag, extra;
        long long n = -1, m = -1;
        if (! (header >> tag >> n >> m) || tag != "p" || n < 0 || m < 0 || (header >> extra))
            throw ParseError("graph file: bad header '" + line + "'");

        vector<VertexId> vs;
        vector<Edge> edges;
        while (next_line(line)) {
            std::istringstream row(line);
            string kind, a, b;
            row >> kind;
            if (kind == "v") {
                if (! (row >> a) || (row >> extra))
                    throw ParseError("graph file: bad vertex line '" + line + "'");
                if (! edges.empty())
                    throw ParseError("graph file: vertex line after edge lines");
                vs.push_back(a);
            }
            else if (kind == "e") {
                if (! (row >> a >> b) || (row >> extra))
                    throw ParseError("graph file: bad edge line '" + line + "'");
                edges.emplace_back(a, b);
            }
            else
                throw ParseError("graph file: unexpected line '" + line + "'");
        }

        if (vs.size() != static_cast<size_t>(n) || edges.size() != static_cast<size_t>(m))
            throw ParseError("graph file: header counts do not match the body");

        try {
            Graph g(vs, edges);
            if (g.size() != edges.size())
                throw ParseError("graph file: repeated edge");
            return g;
        }
        catch (const ParseError &) {
            throw;
        }
        catch (const DomainError & e) {
            throw ParseError(string("graph file: ") + e.what());
        }
    }

    auto parse_graph(const string & text) -> Graph
    {
        std::istringstream in(text);
        return read_graph(in);
    }

    auto write_graph(std::ostream & out, const Graph & g) -> void
    {
        out << "p " << g.order() << ' ' << g.size() << '\n';
        for (auto & v : g.vertices())
            out << "v " << v << '\n';
        for (auto & [u, v] : g.edges())
            out << "e " << u << ' ' << v << '\n';
    }

    auto format_graph(const Graph & g) -> string
    {
        std::ostringstream out;
        write_graph(out, g);
        return out.str();
    }

    auto read_coloring(std::istream & in) -> Coloring
    {
        Coloring c;
        string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == string::npos)
                continue;
            std::istringstream row(line);
            string v, extra;
            long long col;
            if (! (row >> v >> col) || (row >> extra))
                throw ParseError("colouring file: bad line '" + line + "'");
            if (! c.emplace(v, col).second)
                throw ParseError("colouring file: vertex '" + v + "' coloured twice");
        }
        return c;
    }

    auto write_coloring(std::ostream & out, const Coloring & c) -> void
    {
        for (auto & [v, col] : c)
            out << v << ' ' << col << '\n';
    }
}

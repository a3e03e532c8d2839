#include <chibound/optree.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>

using nlohmann::json;
using std::optional;
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

        auto join_ids(const VertexSet & s) -> string
        {
            string out = "{";
            bool first = true;
            for (auto & v : s) {
                out += (first ? "" : ",") + v;
                first = false;
            }
            return out + "}";
        }

        auto glue_graphs(const Graph & a, const Graph & b) -> Graph
        {
            VertexSet all = a.vertex_set();
            for (auto & v : b.vertices())
                all.insert(v);
            auto edges = a.edges();
            auto more = b.edges();
            edges.insert(edges.end(), more.begin(), more.end());
            return Graph(vector<VertexId>(all.begin(), all.end()), edges);
        }

        auto substitute_graphs(const Graph & base, const std::map<VertexId, Graph> & children) -> Graph
        {
            vector<VertexId> vertices;
            vector<Edge> edges;
            std::map<VertexId, vector<VertexId>> named;
            for (auto & [b, child] : children) {
                auto & ids = named[b];
                for (auto & v : child.vertices()) {
                    ids.push_back(b + "/" + v);
                    vertices.push_back(ids.back());
                }
                for (auto & [u, v] : child.edges())
                    edges.emplace_back(b + "/" + u, b + "/" + v);
            }
            for (auto & [x, y] : base.edges())
                for (auto & u : named[x])
                    for (auto & v : named[y])
                        edges.emplace_back(u, v);
            return Graph(std::move(vertices), edges);
        }

        // Realizes and validates in one pass. Returns nullopt when t or one
        // of its subtrees is illegal; the reasons go to issues.
        auto check(const OpTree & t, const string & path, Diagnostics & issues) -> optional<Graph>
        {
            if (! t) {
                issues.push_back({path, "null-node", "missing subtree"});
                return std::nullopt;
            }

            auto check_glue = [&](const OpTree & left, const OpTree & right, const VertexSet & shared,
                                  bool clique, optional<unsigned> k) -> optional<Graph> {
                auto g1 = check(left, path + ".left", issues);
                auto g2 = check(right, path + ".right", issues);
                auto before = issues.size();
                if (k) {
                    if (*k == 0)
                        issues.push_back({path, "k-positive", "k must be positive"});
                    else if (shared.size() > *k)
                        issues.push_back({path, "shared-size", "|shared| exceeds k"});
                }
                if (! g1 || ! g2)
                    return std::nullopt;

                VertexSet s1 = g1->vertex_set(), s2 = g2->vertex_set(), common;
                std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::inserter(common, common.end()));
                if (std::includes(s2.begin(), s2.end(), s1.begin(), s1.end())
                        || std::includes(s1.begin(), s1.end(), s2.begin(), s2.end()))
                    issues.push_back({path, "incomparable", "glue sides have comparable vertex sets"});
                if (common != shared)
                    issues.push_back({path, "shared-intersection",
                            "shared " + join_ids(shared) + " differs from the side intersection " + join_ids(common)});
                else {
                    if (! (induced_subgraph(*g1, common) == induced_subgraph(*g2, common)))
                        issues.push_back({path, "shared-agree", "sides induce different graphs on shared"});
                    if (clique && ! (is_clique(*g1, common) && is_clique(*g2, common)))
                        issues.push_back({path, "shared-clique", "shared not a clique"});
                }
                if (issues.size() != before)
                    return std::nullopt;
                return glue_graphs(*g1, *g2);
            };

            return std::visit(
                Overloaded{
                    [&](const LeafNode & n) -> optional<Graph> {
                        if (n.class_tag.empty()) {
                            issues.push_back({path, "class-tag", "leaf class tag is empty"});
                            return std::nullopt;
                        }
                        return n.graph;
                    },
                    [&](const SubstituteNode & n) -> optional<Graph> {
                        auto before = issues.size();
                        if (n.base.empty())
                            issues.push_back({path, "base-nonempty", "substitution base is empty"});
                        for (auto & v : n.base.vertices())
                            if (! n.children.contains(v))
                                issues.push_back({path, "child-per-vertex", "no child for base vertex " + v});
                        std::map<VertexId, Graph> realized;
                        for (auto & [v, child] : n.children) {
                            auto child_path = path + ".children[" + v + "]";
                            if (! n.base.contains(v)) {
                                issues.push_back({path, "child-per-vertex", "child for unknown base vertex " + v});
                                continue;
                            }
                            auto g = check(child, child_path, issues);
                            if (! g)
                                continue;
                            if (g->empty())
                                issues.push_back({child_path, "child-nonempty", "substituted child is empty"});
                            realized.emplace(v, std::move(*g));
                        }
                        if (issues.size() != before)
                            return std::nullopt;

                        VertexSet seen;
                        for (auto & [b, g] : realized)
                            for (auto & v : g.vertices())
                                if (! seen.insert(b + "/" + v).second) {
                                    issues.push_back({path, "children-disjoint",
                                            "realized children overlap at " + b + "/" + v});
                                    return std::nullopt;
                                }
                        return substitute_graphs(n.base, realized);
                    },
                    [&](const CliqueGlueNode & n) -> optional<Graph> {
                        return check_glue(n.left, n.right, n.shared, true, std::nullopt);
                    },
                    [&](const KGlueNode & n) -> optional<Graph> {
                        return check_glue(n.left, n.right, n.shared, false, n.k);
                    }},
                t->node);
        }

        auto vertices_of(const OpTree & t) -> VertexSet
        {
            return realize(t).vertex_set();
        }

        auto has_k_glue(const OpTree & t) -> bool
        {
            return node_kinds(t).k_glue;
        }

        // Glues x and y along the clique c, keeping every CliqueGlue below
        // every KGlue. Both operands are already normalized.
        auto glue_along_clique(const OpTree & x, const OpTree & y, const VertexSet & c) -> OpTree
        {
            auto push_into = [&](const KGlueNode & n, const OpTree & other) -> OpTree {
                auto left_vertices = vertices_of(n.left);
                bool in_left = std::includes(left_vertices.begin(), left_vertices.end(), c.begin(), c.end());
                auto & inner = in_left ? n.left : n.right;
                auto & rest = in_left ? n.right : n.left;
                if (! in_left) {
                    auto right_vertices = vertices_of(n.right);
                    if (! std::includes(right_vertices.begin(), right_vertices.end(), c.begin(), c.end()))
                        throw InvariantError("glue-order rewrite: shared clique straddles a small cutset");
                }
                auto inner_vertices = in_left ? left_vertices : vertices_of(n.right);
                OpTree replaced = inner_vertices == c ? other : glue_along_clique(inner, other, c);
                return in_left ? make_k_glue(n.k, replaced, rest, n.shared) : make_k_glue(n.k, rest, replaced, n.shared);
            };

            if (auto p = std::get_if<KGlueNode>(&x->node))
                return push_into(*p, y);
            if (auto p = std::get_if<KGlueNode>(&y->node))
                return push_into(*p, x);
            return make_clique_glue(x, y, c);
        }

        auto to_json(const Graph & g) -> json
        {
            json edges = json::array();
            for (auto & [u, v] : g.edges())
                edges.push_back(json::array({u, v}));
            return json{{"vertices", g.vertices()}, {"edges", edges}};
        }

        auto to_json(const OpTree & t) -> json
        {
            return std::visit(
                Overloaded{
                    [](const LeafNode & n) -> json {
                        return json{{"leaf", {{"graph", to_json(n.graph)}, {"class", n.class_tag}}}};
                    },
                    [](const SubstituteNode & n) -> json {
                        json children = json::object();
                        for (auto & [v, c] : n.children)
                            children[v] = to_json(c);
                        return json{{"substitute", {{"base", to_json(n.base)}, {"children", children}}}};
                    },
                    [](const CliqueGlueNode & n) -> json {
                        return json{{"clique_glue",
                                {{"left", to_json(n.left)}, {"right", to_json(n.right)}, {"shared", n.shared}}}};
                    },
                    [](const KGlueNode & n) -> json {
                        return json{{"k_glue", {{"k", n.k}, {"left", to_json(n.left)}, {"right", to_json(n.right)},
                                {"shared", n.shared}}}};
                    }},
                t->node);
        }

        auto expect_keys(const json & j, const vector<string> & required, const string & where) -> void
        {
            if (! j.is_object())
                throw ParseError(where + ": expected an object");
            for (auto & [key, value] : j.items())
                if (std::find(required.begin(), required.end(), key) == required.end())
                    throw ParseError(where + ": unknown key '" + key + "'");
            for (auto & key : required)
                if (! j.contains(key))
                    throw ParseError(where + ": missing key '" + key + "'");
        }

        auto string_list(const json & j, const string & where) -> vector<string>
        {
            if (! j.is_array())
                throw ParseError(where + ": expected an array of vertex ids");
            vector<string> out;
            for (auto & x : j) {
                if (! x.is_string())
                    throw ParseError(where + ": vertex ids must be strings");
                out.push_back(x.get<string>());
            }
            return out;
        }

        auto graph_from_json(const json & j, const string & where) -> Graph
        {
            if (j.is_string())
                return parse_graph(j.get<string>());
            expect_keys(j, {"vertices", "edges"}, where);
            if (! j["edges"].is_array())
                throw ParseError(where + ": edges must be an array");
            vector<Edge> edges;
            for (auto & e : j["edges"]) {
                auto pair = string_list(e, where + ".edges");
                if (pair.size() != 2)
                    throw ParseError(where + ": every edge needs exactly two endpoints");
                edges.emplace_back(pair[0], pair[1]);
            }
            try {
                return Graph(string_list(j["vertices"], where + ".vertices"), edges);
            }
            catch (const ParseError &) {
                throw;
            }
            catch (const DomainError & e) {
                throw ParseError(where + ": " + e.what());
            }
        }

        auto shared_from_json(const json & j, const string & where) -> VertexSet
        {
            auto ids = string_list(j, where);
            VertexSet s(ids.begin(), ids.end());
            if (s.size() != ids.size())
                throw ParseError(where + ": repeated vertex id");
            return s;
        }

        auto tree_from_json(const json & j, const string & where) -> OpTree
        {
            if (! j.is_object() || j.size() != 1)
                throw ParseError(where + ": a node is an object with exactly one key");
            auto & [kind, body] = *j.items().begin();
            if (kind == "leaf") {
                expect_keys(body, {"graph", "class"}, where + ".leaf");
                if (! body["class"].is_string())
                    throw ParseError(where + ".leaf: class must be a string");
                return make_leaf(graph_from_json(body["graph"], where + ".leaf.graph"), body["class"].get<string>());
            }
            if (kind == "substitute") {
                expect_keys(body, {"base", "children"}, where + ".substitute");
                if (! body["children"].is_object())
                    throw ParseError(where + ".substitute: children must be an object");
                std::map<VertexId, OpTree> children;
                for (auto & [v, c] : body["children"].items())
                    children.emplace(v, tree_from_json(c, where + ".children[" + v + "]"));
                return make_substitute(graph_from_json(body["base"], where + ".substitute.base"), std::move(children));
            }
            if (kind == "clique_glue") {
                expect_keys(body, {"left", "right", "shared"}, where + ".clique_glue");
                return make_clique_glue(tree_from_json(body["left"], where + ".left"),
                        tree_from_json(body["right"], where + ".right"), shared_from_json(body["shared"], where + ".shared"));
            }
            if (kind == "k_glue") {
                expect_keys(body, {"k", "left", "right", "shared"}, where + ".k_glue");
                if (! body["k"].is_number_unsigned())
                    throw ParseError(where + ".k_glue: k must be a non-negative integer");
                return make_k_glue(body["k"].get<unsigned>(), tree_from_json(body["left"], where + ".left"),
                        tree_from_json(body["right"], where + ".right"), shared_from_json(body["shared"], where + ".shared"));
            }
            throw ParseError(where + ": unknown node kind '" + kind + "'");
        }
    }

    auto make_leaf(Graph g, string class_tag) -> OpTree
    {
        return std::make_shared<const OpNode>(OpNode{LeafNode{std::move(g), std::move(class_tag)}});
    }

    auto make_substitute(Graph base, std::map<VertexId, OpTree> children) -> OpTree
    {
        return std::make_shared<const OpNode>(OpNode{SubstituteNode{std::move(base), std::move(children)}});
    }

    auto make_clique_glue(OpTree left, OpTree right, VertexSet shared) -> OpTree
    {
        return std::make_shared<const OpNode>(OpNode{CliqueGlueNode{std::move(left), std::move(right), std::move(shared)}});
    }

    auto make_k_glue(unsigned k, OpTree left, OpTree right, VertexSet shared) -> OpTree
    {
        return std::make_shared<const OpNode>(OpNode{KGlueNode{k, std::move(left), std::move(right), std::move(shared)}});
    }

    auto is_leaf(const OpTree & t) -> bool { return std::holds_alternative<LeafNode>(t->node); }
    auto is_substitute(const OpTree & t) -> bool { return std::holds_alternative<SubstituteNode>(t->node); }
    auto is_clique_glue(const OpTree & t) -> bool { return std::holds_alternative<CliqueGlueNode>(t->node); }
    auto is_k_glue(const OpTree & t) -> bool { return std::holds_alternative<KGlueNode>(t->node); }

    auto node_kinds(const OpTree & t) -> NodeKinds
    {
        NodeKinds kinds;
        auto merge = [&](const NodeKinds & o) {
            kinds.leaf |= o.leaf;
            kinds.substitute |= o.substitute;
            kinds.clique_glue |= o.clique_glue;
            kinds.k_glue |= o.k_glue;
        };
        std::visit(Overloaded{[&](const LeafNode &) { kinds.leaf = true; },
                           [&](const SubstituteNode & n) {
                               kinds.substitute = true;
                               for (auto & [v, c] : n.children)
                                   merge(node_kinds(c));
                           },
                           [&](const CliqueGlueNode & n) {
                               kinds.clique_glue = true;
                               merge(node_kinds(n.left));
                               merge(node_kinds(n.right));
                           },
                           [&](const KGlueNode & n) {
                               kinds.k_glue = true;
                               merge(node_kinds(n.left));
                               merge(node_kinds(n.right));
                           }},
                t->node);
        return kinds;
    }

    auto max_k(const OpTree & t) -> unsigned
    {
        return std::visit(Overloaded{[](const LeafNode &) -> unsigned { return 0; },
                                  [](const SubstituteNode & n) -> unsigned {
                                      unsigned k = 0;
                                      for (auto & [v, c] : n.children)
                                          k = std::max(k, max_k(c));
                                      return k;
                                  },
                                  [](const CliqueGlueNode & n) -> unsigned {
                                      return std::max(max_k(n.left), max_k(n.right));
                                  },
                                  [](const KGlueNode & n) -> unsigned {
                                      return std::max({n.k, max_k(n.left), max_k(n.right)});
                                  }},
                t->node);
    }

    auto clique_glue_above_k_glue(const OpTree & t) -> bool
    {
        return std::visit(Overloaded{[](const LeafNode &) { return false; },
                                  [](const SubstituteNode & n) {
                                      return std::any_of(n.children.begin(), n.children.end(),
                                              [](auto & c) { return clique_glue_above_k_glue(c.second); });
                                  },
                                  [](const CliqueGlueNode & n) { return has_k_glue(n.left) || has_k_glue(n.right); },
                                  [](const KGlueNode & n) {
                                      return clique_glue_above_k_glue(n.left) || clique_glue_above_k_glue(n.right);
                                  }},
                t->node);
    }

    auto glue_node_count(const OpTree & t) -> std::size_t
    {
        return std::visit(Overloaded{[](const LeafNode &) -> std::size_t { return 0; },
                                  [](const SubstituteNode & n) -> std::size_t {
                                      std::size_t total = 0;
                                      for (auto & [v, c] : n.children)
                                          total += glue_node_count(c);
                                      return total;
                                  },
                                  [](const CliqueGlueNode & n) -> std::size_t {
                                      return 1 + glue_node_count(n.left) + glue_node_count(n.right);
                                  },
                                  [](const KGlueNode & n) -> std::size_t {
                                      return 1 + glue_node_count(n.left) + glue_node_count(n.right);
                                  }},
                t->node);
    }

    namespace
    {
        auto describe(const Diagnostics & d) -> string
        {
            string out = "invalid operation tree";
            for (auto & i : d)
                out += "\n  " + i.path + ": " + i.message + " [" + i.invariant + "]";
            return out;
        }
    }

    ValidationError::ValidationError(Diagnostics d) :
        DomainError(describe(d)), _diagnostics(std::move(d))
    {
    }

    auto validate(const OpTree & t) -> Diagnostics
    {
        Diagnostics issues;
        check(t, "$", issues);
        return issues;
    }

    auto realize(const OpTree & t) -> Graph
    {
        Diagnostics issues;
        auto g = check(t, "$", issues);
        if (! g)
            throw ValidationError(std::move(issues));
        return std::move(*g);
    }

    auto substitution_depth(const OpTree & t) -> int
    {
        return std::visit(Overloaded{[](const LeafNode & n) -> int { return n.graph.empty() ? -1 : 0; },
                                  [](const SubstituteNode & n) -> int {
                                      int depth = -1;
                                      for (auto & [v, c] : n.children) {
                                          auto isolated = n.base.degree(*n.base.index_of(v)) == 0;
                                          depth = std::max(depth, substitution_depth(c) + (isolated ? 0 : 1));
                                      }
                                      return depth;
                                  },
                                  [](const CliqueGlueNode &) -> int {
                                      throw DomainError("substitution depth is undefined for trees with glue nodes");
                                  },
                                  [](const KGlueNode &) -> int {
                                      throw DomainError("substitution depth is undefined for trees with glue nodes");
                                  }},
                t->node);
    }

    auto normalize_glue_order(const OpTree & t) -> OpTree
    {
        return std::visit(Overloaded{[&](const LeafNode &) -> OpTree { return t; },
                                  [](const SubstituteNode &) -> OpTree {
                                      throw DomainError("glue-order rewriting accepts Leaf, CliqueGlue and KGlue nodes only");
                                  },
                                  [](const CliqueGlueNode & n) -> OpTree {
                                      return glue_along_clique(normalize_glue_order(n.left),
                                              normalize_glue_order(n.right), n.shared);
                                  },
                                  [](const KGlueNode & n) -> OpTree {
                                      return make_k_glue(n.k, normalize_glue_order(n.left),
                                              normalize_glue_order(n.right), n.shared);
                                  }},
                t->node);
    }

    auto decompose_small_cutsets(const Graph & g, unsigned k, std::uint64_t budget) -> OpTree
    {
        if (g.empty())
            throw DomainError("decompose_small_cutsets: the graph must be non-empty");
        if (k == 0)
            throw DomainError("decompose_small_cutsets: k must be positive");
        if (g.order() < 2 || is_complete(g))
            return make_leaf(g, "piece");
        auto cut = min_vertex_cutset(g, k, budget);
        if (! cut.found)
            return make_leaf(g, "piece");
        auto left = cut.sides.first, right = cut.sides.second;
        left.insert(cut.cutset.begin(), cut.cutset.end());
        right.insert(cut.cutset.begin(), cut.cutset.end());
        return make_k_glue(k, decompose_small_cutsets(induced_subgraph(g, left), k, budget),
                decompose_small_cutsets(induced_subgraph(g, right), k, budget), cut.cutset);
    }

    auto parse_tree(const string & text) -> OpTree
    {
        json j;
        try {
            j = json::parse(text);
        }
        catch (const json::parse_error & e) {
            throw ParseError(string("tree file is not valid JSON: ") + e.what());
        }
        return tree_from_json(j, "$");
    }

    auto read_tree(std::istream & in) -> OpTree
    {
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return parse_tree(buffer.str());
    }

    auto format_tree(const OpTree & t) -> string
    {
        return to_json(t).dump(2) + "\n";
    }
}

#include "support.hpp"

#include <chibound/errors.hpp>

#include <doctest.h>

#include <sstream>

using namespace chibound;
using namespace testing;

namespace
{
    auto c5() -> Graph
    {
        return cycle_graph(5, "v");
    }

    auto edge_set(const Graph & g) -> std::set<Edge>
    {
        auto e = g.edges();
        return {e.begin(), e.end()};
    }
}

TEST_CASE("graphs are symmetric, irreflexive and may be empty")
{
    Graph empty;
    CHECK(empty.order() == 0);
    CHECK(empty.size() == 0);

    Graph g({"a", "b", "c"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}});
    CHECK(g.size() == 2);
    CHECK(g.adjacent("a", "b"));
    CHECK(g.adjacent("b", "a"));
    CHECK_FALSE(g.adjacent("a", "c"));

    CHECK_THROWS_AS(Graph({"a"}, {{"a", "a"}}), DomainError);
    CHECK_THROWS_AS(Graph({"a"}, {{"a", "b"}}), DomainError);
    CHECK_THROWS_AS(Graph({"a", "a"}, {}), DomainError);
}

TEST_CASE("induced subgraph")
{
    auto k3 = complete_on({"a", "b", "c"});
    CHECK(induced_subgraph(k3, {"a", "b"}) == complete_on({"a", "b"}));
    CHECK(induced_subgraph(c5(), c5().vertex_set()) == c5());

    auto p = induced_subgraph(c5(), {"v0", "v1", "v2"});
    CHECK(p.order() == 3);
    CHECK(edge_set(p) == std::set<Edge>{{"v0", "v1"}, {"v1", "v2"}});

    CHECK_THROWS_AS(induced_subgraph(k3, {"z"}), DomainError);
}

TEST_CASE("induced subgraphs keep |s| vertices and only edges of g")
{
    SplitMix64 rng(7);
    for (int round = 0; round < 50; ++round) {
        auto g = random_graph(rng, 9, 40);
        VertexSet s;
        for (auto & v : g.vertices())
            if (rng.below(2))
                s.insert(v);
        auto h = induced_subgraph(g, s);
        CHECK(h.order() == s.size());
        for (auto & [u, v] : h.edges())
            CHECK(g.adjacent(u, v));
        for (auto & u : s)
            for (auto & v : s)
                if (u != v)
                    CHECK(h.adjacent(u, v) == g.adjacent(u, v));
    }
}

TEST_CASE("disjoint union")
{
    auto two = disjoint_union(complete_graph(1, "a"), complete_graph(1, "b"));
    CHECK(two.order() == 2);
    CHECK(two.size() == 0);

    auto six = disjoint_union(complete_graph(3, "a"), complete_graph(3, "b"));
    CHECK(six.order() == 6);
    CHECK(six.size() == 6);
    CHECK(connected_components(six).size() == 2);

    CHECK(disjoint_union(Graph{}, c5()) == c5());
    CHECK_THROWS_AS(disjoint_union(c5(), c5()), DomainError);
}

TEST_CASE("Mycielskian of K2 is a five-cycle")
{
    auto m = mycielskian(complete_graph(2));
    CHECK(m.order() == 5);
    CHECK(m.size() == 5);
    CHECK(isomorphic(m, c5()));
    CHECK_THROWS_AS(mycielskian(Graph{}), DomainError);
}

TEST_CASE("Mycielskian counts and the clique and chromatic numbers")
{
    SplitMix64 rng(11);
    for (int round = 0; round < 25; ++round) {
        auto g = random_graph(rng, 3 + rng.below(4), 50);
        if (g.size() == 0)
            continue;
        auto m = mycielskian(g);
        CHECK(m.order() == 2 * g.order() + 1);
        CHECK(m.size() == 3 * g.size() + g.order());
        CHECK(reference_clique_number(m) == reference_clique_number(g));
        CHECK(reference_chromatic_number(m) == reference_chromatic_number(g) + 1);
    }
}

TEST_CASE("Mycielskian shadows are stable and copy neighbourhoods")
{
    auto g = path_graph(4, "p");
    auto m = mycielskian(g);
    for (auto & v : g.vertices()) {
        CHECK(m.adjacent("w", "w/" + v));
        for (auto & u : g.vertices()) {
            CHECK_FALSE(m.adjacent("w/" + v, "w/" + u));
            CHECK(m.adjacent("w/" + v, "v/" + u) == g.adjacent(v, u));
        }
    }
}

TEST_CASE("lexicographic product")
{
    auto h = c5();
    auto k1h = lex_product(complete_graph(1), h);
    CHECK(isomorphic(k1h, h));

    auto k4 = lex_product(complete_graph(2), complete_graph(2));
    CHECK(k4.order() == 4);
    CHECK(is_complete(k4));

    auto c5c5 = lex_product(c5(), c5());
    CHECK(c5c5.order() == 25);
    CHECK(reference_clique_number(c5c5) == 4);

    CHECK_THROWS_AS(lex_product(Graph{}, h), DomainError);
}

TEST_CASE("lexicographic product is associative up to relabelling")
{
    auto a = path_graph(2, "a"), b = path_graph(2, "b");
    auto c = edgeless_graph(2, "c");
    CHECK(isomorphic(lex_product(lex_product(a, b), c), lex_product(a, lex_product(b, c))));
    auto d = Graph({"x", "y"}, {});
    CHECK(isomorphic(lex_product(lex_product(d, a), c), lex_product(d, lex_product(a, c))));
}

TEST_CASE("homogeneous sets")
{
    auto g = c5();
    CHECK(is_homogeneous(g, g.vertex_set()));
    for (auto & v : g.vertices())
        CHECK(is_homogeneous(g, {v}));

    auto p4 = path_graph(4, "p");
    CHECK_FALSE(is_homogeneous(p4, {"p1", "p3"}));
    CHECK_THROWS_AS(is_homogeneous(p4, {}), DomainError);
}

TEST_CASE("homogeneity agrees with a brute-force mixedness check")
{
    SplitMix64 rng(3);
    for (int round = 0; round < 20; ++round) {
        auto g = random_graph(rng, 6, 50);
        auto n = g.order();
        for (std::uint32_t m = 1; m < (1u << n); ++m) {
            VertexSet s;
            for (std::size_t i = 0; i < n; ++i)
                if ((m >> i) & 1u)
                    s.insert(g.id(i));
            bool expected = true;
            for (std::size_t x = 0; x < n; ++x) {
                if ((m >> x) & 1u)
                    continue;
                bool some = false, all = true;
                for (std::size_t i = 0; i < n; ++i)
                    if ((m >> i) & 1u) {
                        some = some || g.adjacent(x, i);
                        all = all && g.adjacent(x, i);
                    }
                if (some && ! all)
                    expected = false;
            }
            CHECK(is_homogeneous(g, s) == expected);
        }
    }
}

TEST_CASE("proper colourings")
{
    auto k2 = complete_graph(2);
    CHECK_FALSE(is_proper(k2, {{"0", 1}, {"1", 1}}));
    CHECK(is_proper(k2, {{"0", 1}, {"1", 2}}));
    CHECK_THROWS_AS(is_proper(k2, {{"0", 1}}), DomainError);

    auto g = c5();
    for (std::uint32_t m = 0; m < 32; ++m) {
        Coloring c;
        for (std::size_t i = 0; i < 5; ++i)
            c[g.id(i)] = (m >> i) & 1u;
        CHECK_FALSE(is_proper(g, c));
    }
}

TEST_CASE("graph text format round-trips with sorted output")
{
    Graph g({"b", "a", "c"}, {{"c", "a"}, {"b", "a"}});
    auto text = format_graph(g);
    CHECK(text == "p 3 2\nv a\nv b\nv c\ne a b\ne a c\n");
    CHECK(parse_graph(text) == g);

    CHECK_THROWS_AS(parse_graph("p 2 1\nv a\nv b\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("p 1 0\nv a\nq\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("p 1 1\nv a\ne a z\n"), ParseError);
}

TEST_CASE("colouring format")
{
    Coloring c{{"b", 2}, {"a", 0}};
    std::ostringstream out;
    write_coloring(out, c);
    CHECK(out.str() == "a 0\nb 2\n");
    std::istringstream in(out.str());
    CHECK(read_coloring(in) == c);
    std::istringstream bad("a x\n");
    CHECK_THROWS_AS(read_coloring(bad), ParseError);
}

TEST_CASE("compact renumbers colours by first appearance")
{
    Coloring c{{"a", 7}, {"b", 3}, {"c", 7}};
    CHECK(compact(c) == Coloring{{"a", 0}, {"b", 1}, {"c", 0}});
    CHECK(colors_used(c) == 2);
}

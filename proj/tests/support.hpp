#pragma once

// Test-side reference computations. These deliberately share no code with the
// library oracles: plain subset enumeration and naive backtracking.

#include <chibound/generators.hpp>
#include <chibound/graph.hpp>
#include <chibound/numeric.hpp>
#include <chibound/oracle.hpp>
#include <chibound/optree.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace testing
{
    using namespace chibound;

    inline auto masks(const Graph & g) -> std::vector<std::uint32_t>
    {
        if (g.order() > 30)
            throw std::logic_error("reference oracles are limited to 30 vertices");
        std::vector<std::uint32_t> adj(g.order(), 0);
        for (std::size_t i = 0; i < g.order(); ++i)
            for (std::size_t j = 0; j < g.order(); ++j)
                if (g.adjacent(i, j))
                    adj[i] |= 1u << j;
        return adj;
    }

    inline auto reference_clique_number(const Graph & g) -> unsigned
    {
        auto adj = masks(g);
        unsigned best = 0;
        // grow cliques vertex by vertex; each clique is visited once by its sorted order
        auto grow = [&](auto & self, std::uint32_t candidates, unsigned size) -> void {
            best = std::max(best, size);
            while (candidates) {
                auto v = static_cast<unsigned>(__builtin_ctz(candidates));
                candidates &= candidates - 1;
                self(self, candidates & adj[v], size + 1);
            }
        };
        grow(grow, g.order() == 32 ? ~0u : (1u << g.order()) - 1, 0);
        return best;
    }

    inline auto colourable(const std::vector<std::uint32_t> & adj, unsigned k) -> bool
    {
        std::vector<int> colour(adj.size(), -1);
        auto place = [&](auto & self, std::size_t v, int used) -> bool {
            if (v == adj.size())
                return true;
            for (int c = 0; c < std::min<int>(used + 1, static_cast<int>(k)); ++c) {
                bool ok = true;
                for (std::size_t u = 0; u < v && ok; ++u)
                    ok = ! ((adj[v] >> u) & 1u) || colour[u] != c;
                if (! ok)
                    continue;
                colour[v] = c;
                if (self(self, v + 1, std::max(used, c + 1)))
                    return true;
            }
            colour[v] = -1;
            return false;
        };
        return place(place, 0, 0);
    }

    inline auto reference_chromatic_number(const Graph & g) -> unsigned
    {
        auto adj = masks(g);
        unsigned k = 0;
        while (! colourable(adj, k))
            ++k;
        return k;
    }

    /// Every stable set, including the empty one, as bitmasks.
    inline auto reference_stable_sets(const Graph & g) -> std::vector<std::uint32_t>
    {
        auto adj = masks(g);
        std::vector<std::uint32_t> out;
        auto grow = [&](auto & self, std::uint32_t set, std::uint32_t candidates) -> void {
            out.push_back(set);
            while (candidates) {
                auto v = static_cast<unsigned>(__builtin_ctz(candidates));
                candidates &= candidates - 1;
                self(self, set | (1u << v), candidates & ~adj[v]);
            }
        };
        grow(grow, 0, g.order() == 32 ? ~0u : (1u << g.order()) - 1);
        return out;
    }

    /// Checks an LP duality certificate: the stable-set weights cover every
    /// vertex, the clique weights put at most 1 on every stable set, and the
    /// two totals agree with value. Proves value is the exact optimum.
    inline auto certifies_fractional_optimum(const Graph & g, const FractionalColoring & fc) -> bool
    {
        Rational primal = 0, dual = 0;
        std::map<VertexId, Rational> cover;
        for (auto & [set, w] : fc.stable_set_weights) {
            if (w < 0 || ! is_stable(g, set))
                return false;
            primal += w;
            for (auto & v : set)
                cover[v] += w;
        }
        for (auto & v : g.vertices())
            if (cover[v] < 1)
                return false;
        std::vector<Rational> y(g.order());
        for (auto & [v, w] : fc.clique_weights) {
            if (w < 0)
                return false;
            y[*g.index_of(v)] = w;
            dual += w;
        }
        for (auto s : reference_stable_sets(g)) {
            Rational load = 0;
            for (std::size_t i = 0; i < g.order(); ++i)
                if ((s >> i) & 1u)
                    load += y[i];
            if (load > 1)
                return false;
        }
        return primal == fc.value && dual == fc.value;
    }

    inline auto random_graph(SplitMix64 & rng, std::size_t n, unsigned percent) -> Graph
    {
        std::vector<VertexId> ids;
        for (std::size_t i = 0; i < n; ++i)
            ids.push_back("u" + std::to_string(i));
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.below(100) < percent)
                    edges.emplace_back(ids[i], ids[j]);
        return Graph(ids, edges);
    }

    /// Exhaustive isomorphism test for small graphs.
    inline auto isomorphic(const Graph & a, const Graph & b) -> bool
    {
        if (a.order() != b.order() || a.size() != b.size())
            return false;
        std::vector<std::size_t> perm(a.order());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool same = true;
            for (std::size_t i = 0; i < a.order() && same; ++i)
                for (std::size_t j = i + 1; j < a.order() && same; ++j)
                    same = a.adjacent(i, j) == b.adjacent(perm[i], perm[j]);
            if (same)
                return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    }

    inline auto triangle(const std::vector<VertexId> & ids) -> Graph
    {
        return complete_on(VertexSet(ids.begin(), ids.end()));
    }
}

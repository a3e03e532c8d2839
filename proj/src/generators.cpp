#include <chibound/generators.hpp>
#include <chibound/errors.hpp>
#include <chibound/oracle.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <variant>

using std::size_t;
using std::string;
using std::vector;

namespace chibound
{
    auto SplitMix64::next() -> std::uint64_t
    {
        std::uint64_t z = (_state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    auto SplitMix64::below(std::uint64_t n) -> std::uint64_t
    {
        if (n == 0)
            throw DomainError("SplitMix64::below needs a positive bound");
        // rejection keeps the draw unbiased
        auto limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        for (;;) {
            auto x = next();
            if (x < limit)
                return x % n;
        }
    }

    namespace
    {
        constexpr size_t max_generated_order = 100;

        template <typename T>
        auto shuffle(vector<T> & items, SplitMix64 & rng) -> void
        {
            for (size_t i = items.size(); i > 1; --i)
                std::swap(items[i - 1], items[rng.below(i)]);
        }

        auto rename_tree(const OpTree & t, const std::map<VertexId, VertexId> & mapping) -> OpTree
        {
            if (auto n = std::get_if<LeafNode>(&t->node))
                return make_leaf(relabel(n->graph, mapping), n->class_tag);
            if (std::holds_alternative<SubstituteNode>(t->node))
                return t;
            auto rename_set = [&](const VertexSet & s) {
                VertexSet out;
                for (auto & v : s) {
                    auto it = mapping.find(v);
                    out.insert(it == mapping.end() ? v : it->second);
                }
                return out;
            };
            if (auto n = std::get_if<CliqueGlueNode>(&t->node))
                return make_clique_glue(rename_tree(n->left, mapping), rename_tree(n->right, mapping), rename_set(n->shared));
            auto & n = std::get<KGlueNode>(t->node);
            return make_k_glue(n.k, rename_tree(n.left, mapping), rename_tree(n.right, mapping), rename_set(n.shared));
        }

        // Vertices that rename_tree can rename: those not produced by a substitution.
        auto renamable(const OpTree & t) -> VertexSet
        {
            if (auto n = std::get_if<LeafNode>(&t->node))
                return n->graph.vertex_set();
            if (std::holds_alternative<SubstituteNode>(t->node))
                return {};
            auto sides = [&](const OpTree & left, const OpTree & right) {
                auto l = renamable(left), r = renamable(right);
                auto lv = realize(left).vertex_set(), rv = realize(right).vertex_set();
                VertexSet out;
                for (auto & v : lv)
                    if (l.contains(v) && (! rv.contains(v) || r.contains(v)))
                        out.insert(v);
                for (auto & v : rv)
                    if (r.contains(v) && ! lv.contains(v))
                        out.insert(v);
                return out;
            };
            if (auto n = std::get_if<CliqueGlueNode>(&t->node))
                return sides(n->left, n->right);
            auto & n = std::get<KGlueNode>(t->node);
            return sides(n.left, n.right);
        }

        auto random_clique(const Graph & g, const VertexSet & candidates, size_t s, SplitMix64 & rng)
            -> std::optional<vector<VertexId>>
        {
            vector<VertexId> pool(candidates.begin(), candidates.end());
            for (int attempt = 0; attempt < 20; ++attempt) {
                shuffle(pool, rng);
                vector<VertexId> q;
                for (auto & v : pool) {
                    if (q.size() == s)
                        break;
                    if (std::all_of(q.begin(), q.end(), [&](auto & u) { return g.adjacent(u, v); }))
                        q.push_back(v);
                }
                if (q.size() == s)
                    return q;
            }
            return std::nullopt;
        }

        // An injective map of pattern into target preserving adjacency and
        // non-adjacency.
        auto find_copy(const Graph & target, const Graph & source, const vector<VertexId> & pattern, SplitMix64 & rng)
            -> std::optional<vector<VertexId>>
        {
            vector<VertexId> pool = target.vertices();
            shuffle(pool, rng);
            vector<VertexId> image;
            VertexSet used;
            size_t steps = 0;
            std::function<bool()> extend = [&]() -> bool {
                if (image.size() == pattern.size())
                    return true;
                if (++steps > 20000)
                    return false;
                auto & p = pattern[image.size()];
                for (auto & t : pool) {
                    if (used.contains(t))
                        continue;
                    bool ok = true;
                    for (size_t i = 0; ok && i < image.size(); ++i)
                        ok = source.adjacent(p, pattern[i]) == target.adjacent(t, image[i]);
                    if (! ok)
                        continue;
                    image.push_back(t);
                    used.insert(t);
                    if (extend())
                        return true;
                    used.erase(t);
                    image.pop_back();
                }
                return false;
            };
            if (extend())
                return image;
            return std::nullopt;
        }

        class Builder
        {
        public:
            Builder(const GenConfig & cfg, std::uint64_t seed) : _cfg(cfg), _rng(seed) {}

            auto build(unsigned depth, size_t budget) -> OpTree
            {
                budget = std::max(budget, _cfg.min_leaf_order);
                if (depth >= _cfg.max_depth || budget < 2)
                    return leaf(budget);

                auto & mix = _cfg.mix;
                bool glue_room = budget >= 2 * _cfg.min_leaf_order;
                unsigned weights[] = {mix.leaf, mix.substitute, glue_room ? mix.clique_glue : 0u,
                        glue_room ? mix.k_glue : 0u};
                unsigned total = weights[0] + weights[1] + weights[2] + weights[3];
                if (total == 0)
                    return leaf(budget);
                auto pick = _rng.below(total);
                unsigned kind = 0;
                while (pick >= weights[kind])
                    pick -= weights[kind++];
                switch (kind) {
                case 1:
                    return substitute(depth, budget);
                case 2:
                    return glue(depth, budget, false);
                case 3:
                    return glue(depth, budget, true);
                default:
                    return leaf(budget);
                }
            }

        private:
            const GenConfig & _cfg;
            SplitMix64 _rng;
            size_t _counter = 0;

            auto choose(const vector<string> & pool) -> const string &
            {
                if (pool.empty())
                    throw DomainError("generator pool is empty");
                return pool[_rng.below(pool.size())];
            }

            auto leaf(size_t budget) -> OpTree
            {
                auto hi = std::max(_cfg.min_leaf_order, std::min(_cfg.max_leaf_order, budget));
                auto n = _rng.between(_cfg.min_leaf_order, hi);
                vector<VertexId> ids;
                for (size_t i = 0; i < n; ++i)
                    ids.push_back("v" + std::to_string(_counter++));
                auto & family = choose(_cfg.leaf_pool);
                return make_leaf(pool_graph(family, ids), family);
            }

            auto substitute(unsigned depth, size_t budget) -> OpTree
            {
                auto nb = _rng.between(2, std::max<size_t>(2, std::min(_cfg.max_base_order, budget)));
                vector<VertexId> ids;
                for (size_t i = 0; i < nb; ++i)
                    ids.push_back("b" + std::to_string(i));
                auto base = pool_graph(choose(_cfg.base_pool), ids);

                std::map<VertexId, OpTree> children;
                auto remaining = budget;
                for (size_t i = 0; i < nb; ++i) {
                    auto reserve = nb - i - 1;
                    auto share = remaining > reserve ? remaining - reserve : 1;
                    auto fair = std::max<size_t>(1, 2 * share / (nb - i));
                    auto child = build(depth + 1, _rng.between(1, std::min(share, fair)));
                    auto order = realize(child).order();
                    remaining = remaining > order ? remaining - order : 0;
                    children.emplace(ids[i], std::move(child));
                }
                return make_substitute(std::move(base), std::move(children));
            }

            auto glue(unsigned depth, size_t budget, bool small_cutset) -> OpTree
            {
                auto left = build(depth + 1, _rng.between(_cfg.min_leaf_order, budget - _cfg.min_leaf_order));
                auto gl = realize(left);
                size_t cap = small_cutset ? _cfg.k : gl.order();
                cap = std::min(cap, gl.order() - 1);
                size_t target = 0;
                if (cap > 0 && _rng.below(5) != 0)
                    target = _rng.between(1, cap);
                if (gl.order() + _cfg.min_leaf_order > budget + target)
                    return left;
                auto right = build(depth + 1, budget - gl.order() + target);
                auto gr = realize(right);
                if (gr.order() < target + 1 || gl.order() + gr.order() - target > budget)
                    return left;

                // rename a piece of one side onto the other
                auto movable = renamable(right);
                bool swap_sides = movable.size() < target;
                if (swap_sides) {
                    movable = renamable(left);
                    if (movable.size() < target)
                        return left;
                    std::swap(left, right);
                    std::swap(gl, gr);
                }

                vector<VertexId> pattern, image;
                if (small_cutset) {
                    vector<VertexId> pool(movable.begin(), movable.end());
                    shuffle(pool, _rng);
                    pattern.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(target));
                    auto copy = find_copy(gl, gr, pattern, _rng);
                    if (! copy)
                        return swap_sides ? right : left;
                    image = *copy;
                }
                else {
                    auto q = random_clique(gr, movable, target, _rng);
                    auto q2 = random_clique(gl, gl.vertex_set(), target, _rng);
                    if (! q || ! q2)
                        return swap_sides ? right : left;
                    pattern = *q;
                    image = *q2;
                }

                std::map<VertexId, VertexId> mapping;
                for (size_t i = 0; i < pattern.size(); ++i)
                    mapping.emplace(pattern[i], image[i]);
                right = rename_tree(right, mapping);
                VertexSet shared(image.begin(), image.end());
                if (swap_sides)
                    std::swap(left, right);
                if (small_cutset)
                    return make_k_glue(_cfg.k, std::move(left), std::move(right), std::move(shared));
                return make_clique_glue(std::move(left), std::move(right), std::move(shared));
            }
        };

        auto omega_in(const OpTree & t, unsigned lo, unsigned hi) -> bool
        {
            auto w = clique_number(realize(t));
            return lo <= w && w <= hi;
        }
    }

    auto mycielski_tower(unsigned t) -> Graph
    {
        if (t > 5)
            throw DomainError("mycielski_tower: 3*2^t-1 exceeds " + std::to_string(max_generated_order) + " vertices");
        auto g = complete_graph(2);
        for (unsigned i = 0; i < t; ++i)
            g = mycielskian(g);
        return g;
    }

    auto alternate_o1_o2(unsigned t) -> Graph
    {
        auto g = complete_graph(2);
        unsigned chi = 2;
        for (unsigned i = 0; i < t; ++i) {
            bool odd_step = i % 2 == 0;
            if ((chi % 2 == 1) == odd_step) {
                if (2 * g.order() + 1 > max_generated_order)
                    throw DomainError("alternate_o1_o2: the graph would exceed "
                            + std::to_string(max_generated_order) + " vertices");
                g = mycielskian(g);
                ++chi;
            }
        }
        return g;
    }

    auto lex_power(const Graph & f, unsigned i) -> Graph
    {
        if (i == 0)
            throw DomainError("lex_power needs a positive exponent");
        double order = 1;
        for (unsigned j = 0; j < i; ++j)
            order *= static_cast<double>(f.order());
        if (order > max_generated_order)
            throw DomainError("lex_power: the result would exceed " + std::to_string(max_generated_order) + " vertices");
        auto g = f;
        for (unsigned j = 1; j < i; ++j)
            g = lex_product(f, g);
        return g;
    }

    auto pool_graph(const string & family, const vector<VertexId> & ids) -> Graph
    {
        auto n = ids.size();
        vector<Edge> edges;
        auto path = [&] {
            for (size_t i = 0; i + 1 < n; ++i)
                edges.emplace_back(ids[i], ids[i + 1]);
        };
        if (family == "complete") {
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i + 1; j < n; ++j)
                    edges.emplace_back(ids[i], ids[j]);
        }
        else if (family == "edgeless") {
        }
        else if (family == "path")
            path();
        else if (family == "cycle" || family == "even-cycle") {
            path();
            // below 3 vertices a cycle is a path; even-cycle keeps odd orders as paths
            if (n >= 3 && (family == "cycle" || n % 2 == 0))
                edges.emplace_back(ids[n - 1], ids[0]);
        }
        else
            throw DomainError("unknown graph family '" + family + "'");
        return Graph(ids, edges);
    }

    auto random_optree(const GenConfig & cfg) -> OpTree
    {
        if (cfg.min_leaf_order == 0 || cfg.max_leaf_order < cfg.min_leaf_order)
            throw DomainError("random_optree: bad leaf order range");
        SplitMix64 seeds(cfg.seed);
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto t = Builder(cfg, seeds.next()).build(0, cfg.max_vertices);
            if (realize(t).order() <= std::max(cfg.max_vertices, cfg.min_leaf_order))
                return t;
        }
        vector<VertexId> ids;
        for (size_t i = 0; i < cfg.min_leaf_order; ++i)
            ids.push_back("v" + std::to_string(i));
        return make_leaf(pool_graph(cfg.leaf_pool.at(0), ids), cfg.leaf_pool.at(0));
    }

    auto random_cograph_tree(std::uint64_t seed, size_t max_vertices) -> OpTree
    {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.max_vertices = max_vertices;
        cfg.max_depth = 4;
        cfg.mix = {1, 3, 0, 0};
        cfg.leaf_pool = {"complete"};
        cfg.base_pool = {"complete", "edgeless"};
        return random_optree(cfg);
    }

    auto random_poly_tree(std::uint64_t seed) -> OpTree
    {
        GenConfig cfg;
        cfg.max_vertices = 48;
        cfg.max_depth = 5;
        cfg.mix = {1, 5, 0, 0};
        cfg.leaf_pool = {"complete", "edgeless", "path", "even-cycle"};
        cfg.base_pool = {"complete", "edgeless", "path", "even-cycle"};
        cfg.max_leaf_order = 5;
        SplitMix64 seeds(seed);
        for (int attempt = 0; attempt < 10000; ++attempt) {
            cfg.seed = seeds.next();
            auto t = random_optree(cfg);
            if (substitution_depth(t) >= 3 && omega_in(t, 4, 12))
                return t;
        }
        throw InvariantError("random_poly_tree found no tree with clique number in [4,12] and depth >= 3");
    }

    auto random_kglue_tree(std::uint64_t seed, unsigned k) -> OpTree
    {
        if (k == 0)
            throw DomainError("random_kglue_tree needs k >= 1");
        GenConfig cfg;
        cfg.seed = seed;
        cfg.max_vertices = 24;
        cfg.max_depth = 3;
        cfg.mix = {1, 0, 0, 3};
        cfg.leaf_pool = {"complete"};
        cfg.min_leaf_order = 3;
        cfg.max_leaf_order = 5;
        cfg.k = k;
        return random_optree(cfg);
    }

    auto random_glue_tree(std::uint64_t seed) -> OpTree
    {
        GenConfig cfg;
        cfg.max_vertices = 24;
        cfg.max_depth = 4;
        cfg.mix = {1, 0, 3, 3};
        cfg.leaf_pool = {"complete", "path", "cycle"};
        cfg.min_leaf_order = 2;
        cfg.max_leaf_order = 5;
        SplitMix64 seeds(seed);
        for (int attempt = 0; attempt < 1000; ++attempt) {
            cfg.seed = seeds.next();
            cfg.k = static_cast<unsigned>(1 + attempt % 2);
            auto t = random_optree(cfg);
            if (node_kinds(t).clique_glue)
                return t;
        }
        throw InvariantError("random_glue_tree found no tree with a clique glue");
    }

    auto random_reducible_tree(std::uint64_t seed, size_t max_vertices) -> OpTree
    {
        GenConfig cfg;
        cfg.max_vertices = max_vertices;
        cfg.max_depth = 4;
        cfg.mix = {1, 2, 3, 0};
        cfg.leaf_pool = {"complete", "edgeless", "path", "cycle"};
        cfg.base_pool = {"complete", "edgeless", "path", "cycle"};
        cfg.max_leaf_order = 5;
        SplitMix64 seeds(seed);
        OpTree t;
        for (int attempt = 0; attempt < 100; ++attempt) {
            cfg.seed = seeds.next();
            t = random_optree(cfg);
            if (node_kinds(t).clique_glue)
                return t;
        }
        return t;
    }
}

#include <chibound/oracle.hpp>
#include <chibound/errors.hpp>
#include <chibound/rational_lp.hpp>

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

using std::size_t;
using std::uint64_t;
using std::vector;

namespace chibound
{
    auto step_budget_from_environment() -> uint64_t
    {
        if (const char * env = std::getenv("CHIBOUND_STEP_BUDGET")) {
            char * end = nullptr;
            auto value = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0' || value == 0 || *env == '-')
                throw DomainError("CHIBOUND_STEP_BUDGET must be a positive integer, not '" + std::string(env) + "'");
            return value;
        }
        return default_step_budget;
    }

    namespace
    {
        class Bits
        {
        public:
            explicit Bits(size_t n = 0) : _words((n + 63) / 64, 0) {}

            auto set(size_t i) -> void { _words[i / 64] |= uint64_t{1} << (i % 64); }
            auto reset(size_t i) -> void { _words[i / 64] &= ~(uint64_t{1} << (i % 64)); }
            auto test(size_t i) const -> bool { return (_words[i / 64] >> (i % 64)) & 1u; }

            auto any() const -> bool
            {
                return std::any_of(_words.begin(), _words.end(), [](uint64_t w) { return w != 0; });
            }

            auto count() const -> size_t
            {
                size_t c = 0;
                for (auto w : _words)
                    c += std::popcount(w);
                return c;
            }

            auto first() const -> size_t
            {
                for (size_t k = 0; k < _words.size(); ++k)
                    if (_words[k])
                        return k * 64 + std::countr_zero(_words[k]);
                return std::numeric_limits<size_t>::max();
            }

            auto operator&=(const Bits & o) -> Bits &
            {
                for (size_t k = 0; k < _words.size(); ++k)
                    _words[k] &= o._words[k];
                return *this;
            }

            auto and_not(const Bits & o) -> Bits &
            {
                for (size_t k = 0; k < _words.size(); ++k)
                    _words[k] &= ~o._words[k];
                return *this;
            }

            friend auto operator&(Bits a, const Bits & b) -> Bits { return a &= b; }

            template <typename F>
            auto for_each(F && f) const -> void
            {
                for (size_t k = 0; k < _words.size(); ++k)
                    for (auto w = _words[k]; w; w &= w - 1)
                        f(k * 64 + std::countr_zero(w));
            }

        private:
            vector<uint64_t> _words;
        };

        auto adjacency_bits(const Graph & g) -> vector<Bits>
        {
            vector<Bits> adj(g.order(), Bits(g.order()));
            for (size_t i = 0; i < g.order(); ++i)
                for (auto j : g.neighbours(i))
                    adj[i].set(j);
            return adj;
        }

        auto all_bits(size_t n) -> Bits
        {
            Bits b(n);
            for (size_t i = 0; i < n; ++i)
                b.set(i);
            return b;
        }

        class Steps
        {
        public:
            Steps(uint64_t budget, const char * what) : _budget(budget), _what(what) {}

            auto tick() -> void
            {
                if (++_count > _budget)
                    throw BudgetExceeded(_what);
            }

        private:
            uint64_t _budget;
            uint64_t _count = 0;
            const char * _what;
        };

        // Branch and bound with greedy colouring bounds on bitsets.
        class CliqueSearch
        {
        public:
            CliqueSearch(const Graph & g, uint64_t budget) :
                _n(g.order()), _adj(adjacency_bits(g)), _steps(budget, "clique_number")
            {
            }

            auto run() -> vector<size_t>
            {
                if (_n > 0)
                    expand(all_bits(_n));
                return _best;
            }

        private:
            size_t _n;
            vector<Bits> _adj;
            Steps _steps;
            vector<size_t> _current, _best;

            auto expand(Bits p) -> void
            {
                _steps.tick();

                vector<size_t> order;
                vector<size_t> bound;
                Bits uncoloured = p;
                size_t colour = 0;
                while (uncoloured.any()) {
                    ++colour;
                    Bits q = uncoloured;
                    while (q.any()) {
                        auto v = q.first();
                        q.reset(v);
                        q.and_not(_adj[v]);
                        uncoloured.reset(v);
                        order.push_back(v);
                        bound.push_back(colour);
                    }
                }

                for (size_t k = order.size(); k-- > 0;) {
                    if (_current.size() + bound[k] <= _best.size())
                        return;
                    auto v = order[k];
                    _current.push_back(v);
                    Bits next = p & _adj[v];
                    if (! next.any()) {
                        if (_current.size() > _best.size())
                            _best = _current;
                    }
                    else
                        expand(next);
                    _current.pop_back();
                    p.reset(v);
                }
            }
        };

        class WeightedCliqueSearch
        {
        public:
            WeightedCliqueSearch(const Graph & g, vector<unsigned> weights, uint64_t budget) :
                _g(g), _weights(std::move(weights)), _steps(budget, "max_weight_clique")
            {
            }

            auto run() -> unsigned
            {
                vector<size_t> candidates(_g.order());
                std::iota(candidates.begin(), candidates.end(), 0);
                expand(0, candidates);
                return _best;
            }

        private:
            const Graph & _g;
            vector<unsigned> _weights;
            Steps _steps;
            unsigned _best = 0;

            auto expand(unsigned weight, vector<size_t> candidates) -> void
            {
                _steps.tick();
                _best = std::max(_best, weight);
                unsigned remaining = 0;
                for (auto v : candidates)
                    remaining += _weights[v];
                while (! candidates.empty()) {
                    if (weight + remaining <= _best)
                        return;
                    auto v = candidates.back();
                    candidates.pop_back();
                    remaining -= _weights[v];
                    vector<size_t> next;
                    for (auto w : candidates)
                        if (_g.adjacent(v, w))
                            next.push_back(w);
                    expand(weight + _weights[v], std::move(next));
                }
            }
        };

        // Exact colouring: DSATUR branching, new colours only as the next
        // index, and a maximum clique precoloured 0..|Q|-1.
        class ColouringSearch
        {
        public:
            ColouringSearch(const Graph & g, uint64_t budget) :
                _g(g), _n(g.order()), _steps(budget, "chromatic_number")
            {
            }

            auto run() -> ChromaticResult
            {
                if (_n == 0)
                    return {};

                auto clique = maximum_clique(_g, std::numeric_limits<uint64_t>::max());
                _lower = static_cast<unsigned>(clique.size());

                _best_colours = greedy_dsatur();
                _best = 1 + *std::max_element(_best_colours.begin(), _best_colours.end());

                if (_best > _lower) {
                    _colour.assign(_n, -1);
                    _saturation.assign(_n, 0);
                    _neighbour_count.assign(_n, vector<unsigned>(_best, 0));

                    unsigned used = 0;
                    for (auto & v : clique)
                        assign(*_g.index_of(v), used++);
                    search(clique.size(), used);
                }

                ChromaticResult result;
                result.chi = _best;
                for (size_t v = 0; v < _n; ++v)
                    result.coloring.emplace(_g.id(v), _best_colours[v]);
                return result;
            }

        private:
            const Graph & _g;
            size_t _n;
            Steps _steps;
            unsigned _lower = 0, _best = 0;
            vector<Color> _best_colours;
            vector<Color> _colour;
            vector<unsigned> _saturation;
            vector<vector<unsigned>> _neighbour_count;

            auto greedy_dsatur() const -> vector<Color>
            {
                vector<Color> colour(_n, -1);
                vector<std::set<Color>> seen(_n);
                for (size_t step = 0; step < _n; ++step) {
                    size_t pick = _n;
                    for (size_t v = 0; v < _n; ++v) {
                        if (colour[v] >= 0)
                            continue;
                        if (pick == _n || seen[v].size() > seen[pick].size()
                                || (seen[v].size() == seen[pick].size() && _g.degree(v) > _g.degree(pick)))
                            pick = v;
                    }
                    Color c = 0;
                    while (seen[pick].contains(c))
                        ++c;
                    colour[pick] = c;
                    for (auto w : _g.neighbours(pick))
                        seen[w].insert(c);
                }
                return colour;
            }

            auto assign(size_t v, unsigned c) -> void
            {
                _colour[v] = c;
                for (auto w : _g.neighbours(v))
                    if (_neighbour_count[w][c]++ == 0)
                        ++_saturation[w];
            }

            auto unassign(size_t v) -> void
            {
                auto c = static_cast<unsigned>(_colour[v]);
                _colour[v] = -1;
                for (auto w : _g.neighbours(v))
                    if (--_neighbour_count[w][c] == 0)
                        --_saturation[w];
            }

            auto search(size_t coloured, unsigned used) -> void
            {
                _steps.tick();
                if (used >= _best)
                    return;
                if (coloured == _n) {
                    _best = used;
                    _best_colours = _colour;
                    return;
                }

                size_t pick = _n;
                for (size_t v = 0; v < _n; ++v) {
                    if (_colour[v] >= 0)
                        continue;
                    if (pick == _n || _saturation[v] > _saturation[pick]
                            || (_saturation[v] == _saturation[pick] && _g.degree(v) > _g.degree(pick)))
                        pick = v;
                }

                for (unsigned c = 0; c < used; ++c) {
                    if (_neighbour_count[pick][c] != 0)
                        continue;
                    assign(pick, c);
                    search(coloured + 1, used);
                    unassign(pick);
                    if (_best == _lower || used >= _best)
                        return;
                }

                if (used + 1 < _best) {
                    assign(pick, used);
                    search(coloured + 1, used + 1);
                    unassign(pick);
                }
            }
        };

        // Bron-Kerbosch with pivoting, run on the complement.
        class StableSetEnumeration
        {
        public:
            StableSetEnumeration(const Graph & g, uint64_t budget) :
                _n(g.order()), _steps(budget, "maximal_stable_sets")
            {
                auto adj = adjacency_bits(g);
                _non_adj.assign(_n, all_bits(_n));
                for (size_t v = 0; v < _n; ++v) {
                    _non_adj[v].and_not(adj[v]);
                    _non_adj[v].reset(v);
                }
            }

            auto run() -> vector<vector<size_t>>
            {
                if (_n > 0)
                    expand(all_bits(_n), Bits(_n));
                return std::move(_found);
            }

        private:
            size_t _n;
            vector<Bits> _non_adj;
            Steps _steps;
            vector<size_t> _current;
            vector<vector<size_t>> _found;

            auto expand(Bits p, Bits x) -> void
            {
                _steps.tick();
                if (! p.any() && ! x.any()) {
                    _found.push_back(_current);
                    return;
                }

                size_t pivot = 0, pivot_hits = 0;
                bool have_pivot = false;
                auto consider = [&](size_t u) {
                    auto hits = (p & _non_adj[u]).count();
                    if (! have_pivot || hits > pivot_hits) {
                        pivot = u;
                        pivot_hits = hits;
                        have_pivot = true;
                    }
                };
                p.for_each(consider);
                x.for_each(consider);

                Bits candidates = p;
                candidates.and_not(_non_adj[pivot]);
                vector<size_t> order;
                candidates.for_each([&](size_t v) { order.push_back(v); });
                for (auto v : order) {
                    _current.push_back(v);
                    expand(p & _non_adj[v], x & _non_adj[v]);
                    _current.pop_back();
                    p.reset(v);
                    x.set(v);
                }
            }
        };

        // Unit vertex capacities via in/out splitting; returns min(flow, cap).
        auto vertex_disjoint_paths(const Graph & g, size_t s, size_t t, unsigned cap) -> unsigned
        {
            auto n = g.order();
            auto in = [](size_t v) { return 2 * v; };
            auto out = [](size_t v) { return 2 * v + 1; };
            struct Arc
            {
                size_t to;
                int capacity;
            };
            vector<Arc> arcs;
            vector<vector<size_t>> from(2 * n);
            auto add = [&](size_t a, size_t b, int c) {
                from[a].push_back(arcs.size());
                arcs.push_back({b, c});
                from[b].push_back(arcs.size());
                arcs.push_back({a, 0});
            };
            int infinite = static_cast<int>(n) + 1;
            for (size_t v = 0; v < n; ++v)
                add(in(v), out(v), (v == s || v == t) ? infinite : 1);
            for (size_t v = 0; v < n; ++v)
                for (auto w : g.neighbours(v))
                    add(out(v), in(w), infinite);

            unsigned flow = 0;
            while (flow < cap) {
                vector<size_t> via(2 * n, std::numeric_limits<size_t>::max());
                std::queue<size_t> q;
                q.push(out(s));
                via[out(s)] = arcs.size();
                while (! q.empty() && via[in(t)] == std::numeric_limits<size_t>::max()) {
                    auto x = q.front();
                    q.pop();
                    for (auto a : from[x])
                        if (arcs[a].capacity > 0 && via[arcs[a].to] == std::numeric_limits<size_t>::max()) {
                            via[arcs[a].to] = a;
                            q.push(arcs[a].to);
                        }
                }
                if (via[in(t)] == std::numeric_limits<size_t>::max())
                    break;
                for (auto x = in(t); x != out(s);) {
                    auto a = via[x];
                    arcs[a].capacity -= 1;
                    arcs[a ^ 1].capacity += 1;
                    x = arcs[a ^ 1].to;
                }
                ++flow;
            }
            return flow;
        }
    }

    auto maximum_clique(const Graph & g, uint64_t budget) -> VertexSet
    {
        VertexSet result;
        for (auto v : CliqueSearch(g, budget).run())
            result.insert(g.id(v));
        return result;
    }

    auto clique_number(const Graph & g, uint64_t budget) -> unsigned
    {
        return static_cast<unsigned>(maximum_clique(g, budget).size());
    }

    auto max_weight_clique(const Graph & g, const std::map<VertexId, unsigned> & weights, uint64_t budget) -> unsigned
    {
        vector<unsigned> w;
        for (auto & v : g.vertices()) {
            auto it = weights.find(v);
            if (it == weights.end())
                throw DomainError("max_weight_clique: no weight for vertex '" + v + "'");
            w.push_back(it->second);
        }
        return WeightedCliqueSearch(g, std::move(w), budget).run();
    }

    auto optimal_coloring(const Graph & g, uint64_t budget) -> ChromaticResult
    {
        return ColouringSearch(g, budget).run();
    }

    auto chromatic_number(const Graph & g, uint64_t budget) -> unsigned
    {
        return optimal_coloring(g, budget).chi;
    }

    auto maximal_stable_sets(const Graph & g, uint64_t budget) -> vector<VertexSet>
    {
        vector<VertexSet> result;
        for (auto & members : StableSetEnumeration(g, budget).run()) {
            VertexSet s;
            for (auto v : members)
                s.insert(g.id(v));
            result.push_back(std::move(s));
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    auto fractional_coloring(const Graph & g, uint64_t budget) -> FractionalColoring
    {
        if (g.empty())
            throw DomainError("fractional_chromatic_number: the graph must be non-empty");

        auto stable = maximal_stable_sets(g, budget);

        // Solve the fractional clique LP; its row duals are the colouring weights.
        PackingLp lp;
        lp.c.assign(g.order(), Rational(1));
        for (auto & s : stable) {
            vector<Rational> row(g.order(), Rational(0));
            for (auto & v : s)
                row[*g.index_of(v)] = 1;
            lp.a.push_back(std::move(row));
            lp.b.emplace_back(1);
        }
        auto sol = solve_packing_lp(lp, budget);

        FractionalColoring result;
        result.value = sol.value;
        for (size_t r = 0; r < stable.size(); ++r)
            if (sol.dual[r] != 0)
                result.stable_set_weights.emplace_back(stable[r], sol.dual[r]);
        for (size_t v = 0; v < g.order(); ++v)
            result.clique_weights.emplace(g.id(v), sol.primal[v]);

        Rational cover_total = 0, clique_total = 0;
        std::map<VertexId, Rational> coverage;
        for (auto & [s, w] : result.stable_set_weights) {
            cover_total += w;
            for (auto & v : s)
                coverage[v] += w;
        }
        for (auto & [v, w] : result.clique_weights)
            clique_total += w;
        for (auto & v : g.vertices())
            if (coverage[v] < 1)
                throw InvariantError("fractional colouring leaves vertex " + v + " under-covered");
        for (auto & s : stable) {
            Rational load = 0;
            for (auto & v : s)
                load += result.clique_weights.at(v);
            if (load > 1)
                throw InvariantError("fractional clique overloads a stable set");
        }
        if (cover_total != result.value || clique_total != result.value)
            throw InvariantError("fractional colouring and clique values disagree");

        return result;
    }

    auto fractional_chromatic_number(const Graph & g, uint64_t budget) -> Rational
    {
        return fractional_coloring(g, budget).value;
    }

    auto min_vertex_cutset(const Graph & g, unsigned limit, uint64_t budget) -> CutsetResult
    {
        if (g.order() < 2)
            throw DomainError("min_vertex_cutset: the graph needs at least two vertices");

        Steps steps(budget, "min_vertex_cutset");
        auto n = g.order();

        auto split = [&](const VertexSet & cut) -> std::optional<std::pair<VertexSet, VertexSet>> {
            auto comps = connected_components(delete_vertices(g, cut));
            if (comps.size() < 2)
                return std::nullopt;
            VertexSet rest;
            for (size_t k = 1; k < comps.size(); ++k)
                rest.insert(comps[k].begin(), comps[k].end());
            return std::pair{comps.front(), rest};
        };

        CutsetResult result;
        if (auto sides = split({})) {
            result.found = true;
            result.sides = *sides;
            return result;
        }
        if (is_complete(g))
            return result;

        unsigned connectivity = limit + 1;
        for (size_t s = 0; s < n && connectivity > 0; ++s)
            for (size_t t = s + 1; t < n; ++t)
                if (! g.adjacent(s, t)) {
                    steps.tick();
                    connectivity = std::min(connectivity, vertex_disjoint_paths(g, s, t, connectivity));
                }
        if (connectivity > limit)
            return result;

        // Walk the connectivity-sized subsets in lexicographic order.
        vector<size_t> pick(connectivity);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            steps.tick();
            VertexSet cut;
            for (auto i : pick)
                cut.insert(g.id(i));
            if (auto sides = split(cut)) {
                result.found = true;
                result.cutset = std::move(cut);
                result.sides = *sides;
                return result;
            }
            size_t k = connectivity;
            while (k > 0 && pick[k - 1] == n - connectivity + (k - 1))
                --k;
            if (k == 0)
                break;
            ++pick[k - 1];
            for (size_t j = k; j < connectivity; ++j)
                pick[j] = pick[j - 1] + 1;
        }
        throw InvariantError("min_vertex_cutset: max-flow connectivity has no matching separator");
    }
}

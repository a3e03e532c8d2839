#include <chibound/synthesis.hpp>

#include <algorithm>

using nlohmann::json;
using std::size_t;
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

        class OmegaCache
        {
        public:
            explicit OmegaCache(std::uint64_t budget) : _budget(budget) {}

            auto operator()(const OpTree & t) -> unsigned
            {
                if (auto it = _memo.find(t.get()); it != _memo.end())
                    return it->second;
                auto value = std::visit(
                    Overloaded{[&](const LeafNode & n) { return clique_number(n.graph, _budget); },
                            [&](const SubstituteNode & n) {
                                std::map<VertexId, unsigned> weights;
                                for (auto & [v, c] : n.children)
                                    weights[v] = (*this)(c);
                                return max_weight_clique(n.base, weights, _budget);
                            },
                            [&](const CliqueGlueNode & n) { return std::max((*this)(n.left), (*this)(n.right)); },
                            [&](const KGlueNode & n) { return std::max((*this)(n.left), (*this)(n.right)); }},
                    t->node);
                // holding t keeps its address from being reused by a later node
                _memo.emplace(t.get(), value);
                _alive.push_back(t);
                return value;
            }

        private:
            std::uint64_t _budget;
            std::map<const OpNode *, unsigned> _memo;
            std::vector<OpTree> _alive;
        };

        auto prefixed(const Coloring & c, const VertexId & b) -> Coloring
        {
            Coloring out;
            for (auto & [v, colour] : c)
                out.emplace(b + "/" + v, colour);
            return out;
        }

        auto times(const Interval & a, const Interval & b) -> Interval
        {
            // every bound in play is non-negative
            return Interval{a.lo * b.lo, a.hi * b.hi};
        }

        template <typename F>
        auto certainly_at_most(size_t colours, unsigned start_bits, F && value_at) -> std::pair<bool, Interval>
        {
            Rational used(static_cast<unsigned long>(colours));
            Interval v;
            for (unsigned bits = start_bits; bits <= max_precision_bits; bits *= 2) {
                v = value_at(bits);
                if (used <= v.lo)
                    return {true, v};
                if (used > v.hi)
                    return {false, v};
            }
            return {false, v};
        }

        auto child_path(const string & path, const VertexId & v) -> string
        {
            return path + ".children[" + v + "]";
        }

        // Colours a graph of the base class optimally after checking its
        // chromatic number against f at its clique number.
        auto certified_colouring(const Graph & g, const BoundPtr & f, const string & path, const string & what,
                const SynthesisOptions & opts) -> ChromaticResult
        {
            auto r = optimal_coloring(g, opts.budget);
            auto w = clique_number(g, opts.budget);
            auto check = check_bound(f, w, r.chi, opts.precision_bits);
            if (check.verdict != Verdict::pass)
                throw CertificationError(what + " at " + path + " has chromatic number " + std::to_string(r.chi)
                        + " but the bound " + format_bound(f) + " allows " + to_string(check.value.lo)
                        + " at clique number " + std::to_string(w));
            return r;
        }

        auto require_substitution_tree(const OpTree & t, const string & what) -> void
        {
            auto kinds = node_kinds(t);
            if (kinds.clique_glue || kinds.k_glue)
                throw DomainError(what + " accepts Leaf and Substitute nodes only");
        }

        // Splits a substitution into its base components. Isolated base
        // vertices are handed back alone.
        template <typename Component, typename Isolated>
        auto by_components(const SubstituteNode & n, Component && component, Isolated && isolated) -> Coloring
        {
            Coloring out;
            for (auto & comp : connected_components(n.base)) {
                Coloring part;
                if (comp.size() == 1)
                    part = isolated(*comp.begin());
                else {
                    std::map<VertexId, OpTree> kids;
                    for (auto & v : comp)
                        kids.emplace(v, n.children.at(v));
                    part = component(make_substitute(induced_subgraph(n.base, comp), std::move(kids)), comp);
                }
                out.insert(part.begin(), part.end());
            }
            return out;
        }

        class DepthColourer
        {
        public:
            DepthColourer(BoundPtr f, const SynthesisOptions & opts) : _f(std::move(f)), _opts(opts) {}

            auto colour(const OpTree & t, const string & path) -> Coloring
            {
                return std::visit(
                    Overloaded{[&](const LeafNode & n) -> Coloring {
                                   return certified_colouring(n.graph, _f, path, "leaf", _opts).coloring;
                               },
                            [&](const SubstituteNode & n) -> Coloring {
                                auto base = certified_colouring(n.base, _f, path, "substitution base", _opts).coloring;
                                std::map<VertexId, Coloring> kids;
                                Color width = 1;
                                for (auto & [v, c] : n.children) {
                                    kids[v] = compact(colour(c, child_path(path, v)));
                                    if (n.base.degree(*n.base.index_of(v)) > 0)
                                        width = std::max<Color>(width, colors_used(kids[v]));
                                }
                                Coloring out;
                                for (auto & [v, c] : kids) {
                                    bool isolated = n.base.degree(*n.base.index_of(v)) == 0;
                                    for (auto & [u, colour] : c)
                                        out.emplace(v + "/" + u, isolated ? colour : base.at(v) * width + colour);
                                }
                                return compact(out);
                            },
                            [&](const auto &) -> Coloring {
                                throw DomainError("depth colouring accepts Leaf and Substitute nodes only");
                            }},
                    t->node);
            }

        private:
            BoundPtr _f;
            const SynthesisOptions & _opts;
        };

        class PolyColourer
        {
        public:
            PolyColourer(unsigned a, const SynthesisOptions & opts, OmegaCache & omega, PolyTrace & trace) :
                _a(a), _f(monomial_bound(a)), _opts(opts), _omega(omega), _trace(trace)
            {
            }

            auto colour(const OpTree & t, const string & path) -> Coloring
            {
                if (auto leaf = std::get_if<LeafNode>(&t->node))
                    return certified_colouring(leaf->graph, _f, path, "leaf", _opts).coloring;

                auto & n = std::get<SubstituteNode>(t->node);
                certified_colouring(n.base, _f, path, "substitution base", _opts);
                auto several = connected_components(n.base).size() > 1;
                return by_components(
                    n,
                    [&](const OpTree & sub, const VertexSet & comp) {
                        return component(sub, several ? path + "{" + *comp.begin() + "}" : path);
                    },
                    [&](const VertexId & v) { return prefixed(colour(n.children.at(v), child_path(path, v)), v); });
            }

        private:
            unsigned _a;
            BoundPtr _f;
            const SynthesisOptions & _opts;
            OmegaCache & _omega;
            PolyTrace & _trace;

            auto component(const OpTree & sub, const string & path) -> Coloring
            {
                PolyNode node;
                node.path = path;
                node.a = _a;
                node.depth = substitution_depth(sub);
                node.omega = _omega(sub);
                node.g_value = power(BigInt(node.omega), 3 * _a + 11);

                if (node.depth <= 2 || node.omega <= 3) {
                    node.fallback = true;
                    auto c = DepthColourer(_f, _opts).colour(sub, path);
                    node.colors = colors_used(c);
                    _trace.nodes.push_back(std::move(node));
                    return c;
                }

                auto & n = std::get<SubstituteNode>(sub->node);
                auto omega = node.omega;
                auto m = node.m = poly_alpha_exponent(omega);

                std::map<VertexId, unsigned> wi;
                vector<VertexSet> bucket(m + 2);
                for (auto & [v, c] : n.children) {
                    wi[v] = node.child_omega[v] = _omega(c);
                    node.buckets[v] = poly_bucket(omega, m, wi[v]);
                    bucket[node.buckets[v]].insert(v);
                }
                if (! is_stable(n.base, bucket[0]))
                    throw InvariantError("poly colouring at " + path + ": the large-clique bucket is not stable");

                std::map<VertexId, Coloring> kids;
                for (auto & [v, c] : n.children)
                    kids[v] = compact(colour(c, child_path(path, v)));

                Coloring out;
                std::map<VertexId, std::set<Color>> colours_on;
                Color offset = 0;
                node.bucket_colors.assign(m + 2, 0);
                node.bucket_clique.assign(m + 1, 0);
                for (unsigned j = 1; j <= m + 1; ++j) {
                    if (bucket[j].empty())
                        continue;
                    auto fj = induced_subgraph(n.base, bucket[j]);
                    if (j <= m) {
                        auto c = clique_number(fj, _opts.budget);
                        node.bucket_clique[j] = c;
                        if (power(BigInt(c), m) * power(BigInt(2), j) > power(BigInt(2), m) * power(BigInt(omega), j))
                            throw InvariantError("poly colouring at " + path + ": bucket " + std::to_string(j)
                                    + " has clique number " + std::to_string(c) + " above 2 alpha^j");
                    }
                    auto outer = optimal_coloring(fj, _opts.budget).coloring;
                    Color width = 1;
                    for (auto & v : bucket[j])
                        width = std::max<Color>(width, colors_used(kids[v]));
                    Coloring gj;
                    for (auto & v : bucket[j])
                        for (auto & [u, colour] : kids[v])
                            gj.emplace(v + "/" + u, outer.at(v) * width + colour);
                    gj = compact(gj);
                    auto used = colors_used(gj);
                    for (auto & v : bucket[j])
                        for (auto & [u, colour] : kids[v]) {
                            auto id = v + "/" + u;
                            out[id] = gj.at(id) + offset;
                            colours_on[v].insert(out[id]);
                        }
                    node.bucket_colors[j] = used;
                    offset += static_cast<Color>(used);
                }
                node.disjoint_total = static_cast<size_t>(offset);
                if (BigInt(node.disjoint_total) > node.g_value)
                    throw InvariantError("poly colouring at " + path + ": disjoint palettes use "
                            + std::to_string(node.disjoint_total) + " colours, above g(omega) = " + node.g_value.str());

                vector<VertexId> large(bucket[0].begin(), bucket[0].end());
                std::stable_sort(large.begin(), large.end(), [&](auto & x, auto & y) { return wi[x] > wi[y]; });
                for (auto & v : large) {
                    PolyBlock block;
                    block.vertex = v;
                    block.omega_i = wi[v];
                    block.s_i = poly_block_reach(omega, m, wi[v]);
                    block.p = 1 - Rational(wi[v], omega);

                    std::set<unsigned> near;
                    std::set<Color> forbidden;
                    auto bi = *n.base.index_of(v);
                    for (auto w : n.base.neighbours(bi)) {
                        auto & id = n.base.id(w);
                        near.insert(node.buckets[id]);
                        forbidden.insert(colours_on[id].begin(), colours_on[id].end());
                    }
                    for (auto j : near) {
                        if (j == 0 || (j <= m && j < block.s_i))
                            throw InvariantError("poly colouring at " + path + ": block " + v
                                    + " has a neighbour in bucket " + std::to_string(j));
                        block.neighbour_buckets.push_back(j);
                        block.neighbour_bucket_colors += node.bucket_colors[j];
                    }

                    auto & c = kids[v];
                    block.block_colors = colors_used(c);
                    block.total = block.block_colors + block.neighbour_bucket_colors;
                    if (BigInt(block.total) > node.g_value)
                        throw InvariantError("poly colouring at " + path + ": block " + v + " needs "
                                + std::to_string(block.total) + " colours, above g(omega) = " + node.g_value.str());

                    vector<Color> fresh;
                    for (Color x = 0; fresh.size() < block.block_colors; ++x)
                        if (! forbidden.contains(x))
                            fresh.push_back(x);
                    for (auto & [u, colour] : c) {
                        out[v + "/" + u] = fresh[colour];
                        colours_on[v].insert(fresh[colour]);
                    }
                    node.blocks.push_back(std::move(block));
                }

                node.colors = colors_used(out);
                _trace.nodes.push_back(std::move(node));
                return out;
            }
        };

        class SupermultColourer
        {
        public:
            SupermultColourer(BoundPtr f, const SynthesisOptions & opts, OmegaCache & omega, SupermultTrace & trace) :
                _f(f), _g(supermult_star_bound(f)), _opts(opts), _omega(omega), _trace(trace)
            {
            }

            auto colour(const OpTree & t, const string & path) -> Coloring
            {
                if (auto leaf = std::get_if<LeafNode>(&t->node))
                    return certified_colouring(leaf->graph, _f, path, "leaf", _opts).coloring;

                // the base is judged through its buckets rather than against f directly
                auto & n = std::get<SubstituteNode>(t->node);
                auto several = connected_components(n.base).size() > 1;
                return by_components(
                    n,
                    [&](const OpTree & sub, const VertexSet & comp) {
                        return component(sub, several ? path + "{" + *comp.begin() + "}" : path);
                    },
                    [&](const VertexId & v) { return prefixed(colour(n.children.at(v), child_path(path, v)), v); });
            }

        private:
            BoundPtr _f, _g;
            const SynthesisOptions & _opts;
            OmegaCache & _omega;
            SupermultTrace & _trace;

            auto fail(const string & path, const string & what) -> void
            {
                throw InvariantError("supermultiplicative colouring at " + path + ": " + what);
            }

            auto over(const string & path, const string & what) -> void
            {
                throw CertificationError("supermultiplicative colouring at " + path + ": " + what);
            }

            auto component(const OpTree & sub, const string & path) -> Coloring
            {
                auto & n = std::get<SubstituteNode>(sub->node);
                SupermultNode node;
                node.path = path;
                auto omega = node.omega = _omega(sub);

                std::map<VertexId, unsigned> wi;
                std::map<unsigned, VertexSet> small;
                VertexSet large;
                for (auto & [v, c] : n.children) {
                    wi[v] = _omega(c);
                    if (2 * wi[v] > omega)
                        large.insert(v);
                    else
                        small[wi[v]].insert(v);
                }
                if (! is_stable(n.base, large))
                    fail(path, "children with clique number above omega/2 are not pairwise anti-complete");

                std::map<VertexId, Coloring> kids;
                for (auto & [v, c] : n.children)
                    kids[v] = compact(colour(c, child_path(path, v)));

                Coloring out;
                for (auto & v : large) {
                    node.large.push_back(v);
                    for (auto & [u, colour] : kids[v])
                        out.emplace(v + "/" + u, colour);
                    node.large_colors = std::max(node.large_colors, colors_used(kids[v]));
                }
                if (! large.empty()) {
                    auto [ok, value] = certainly_at_most(node.large_colors, _opts.precision_bits,
                            [&](unsigned bits) { return eval(_g, omega - 1, bits); });
                    node.large_bound = value;
                    if (! ok)
                        over(path, "the large blocks use " + std::to_string(node.large_colors) + " colours, above g(omega-1)");
                }

                auto offset = static_cast<Color>(node.large_colors);
                for (auto & [j, members] : small) {
                    SupermultBucket b;
                    b.j = j;
                    b.vertices.assign(members.begin(), members.end());
                    auto fj = induced_subgraph(n.base, members);
                    b.clique = clique_number(fj, _opts.budget);
                    if (b.clique > omega / j)
                        fail(path, "bucket " + std::to_string(j) + " has clique number above floor(omega/j)");

                    auto outer = optimal_coloring(fj, _opts.budget).coloring;
                    Color width = 1;
                    for (auto & v : members)
                        width = std::max<Color>(width, colors_used(kids[v]));
                    Coloring gj;
                    for (auto & v : members)
                        for (auto & [u, colour] : kids[v])
                            gj.emplace(v + "/" + u, outer.at(v) * width + colour);
                    gj = compact(gj);
                    b.colors = colors_used(gj);
                    for (auto & [id, colour] : gj)
                        out[id] = colour + offset;
                    offset += static_cast<Color>(b.colors);

                    auto [ok, value] = certainly_at_most(b.colors, _opts.precision_bits, [&](unsigned bits) {
                        return times(eval(_f, omega / j, bits), eval(_g, j, bits));
                    });
                    b.bound = value;
                    if (! ok)
                        over(path, "bucket " + std::to_string(j) + " uses " + std::to_string(b.colors)
                                + " colours, above f(floor(omega/j)) g(j)");
                    node.buckets.push_back(std::move(b));
                }

                node.colors = colors_used(out);
                auto [ok, value] = certainly_at_most(node.colors, _opts.precision_bits,
                        [&](unsigned bits) { return eval(_g, omega, bits); });
                node.g_value = value;
                if (! ok)
                    over(path, "the component uses " + std::to_string(node.colors) + " colours, above g(omega)");
                _trace.nodes.push_back(std::move(node));
                return out;
            }
        };

        class KGlueColourer
        {
        public:
            KGlueColourer(BoundPtr f, unsigned k, const SynthesisOptions & opts, KGlueTrace & trace) :
                _f(std::move(f)), _k(k), _limit(2 * k * k - 1), _opts(opts), _trace(trace)
            {
            }

            using Forbidden = std::map<VertexId, std::set<Color>>;

            auto solve(const OpTree & t, const string & path, const Coloring & pre, const Forbidden & forbidden,
                    const std::set<Color> & palette) -> Coloring
            {
                KGlueStep step;
                step.path = path;
                step.precolored = pre.size();
                step.budget = budget(pre, forbidden);
                if (step.budget > _limit)
                    throw InvariantError("small-cutset colouring at " + path + ": constraint budget "
                            + std::to_string(step.budget) + " exceeds 2k^2-1 = " + std::to_string(_limit));

                auto glue = std::get_if<KGlueNode>(&t->node);
                if (! glue || ! node_kinds(t).k_glue)
                    return leaf(t, path, pre, forbidden, palette, step);

                auto left = realize(glue->left).vertex_set(), right = realize(glue->right).vertex_set();
                auto & shared = glue->shared;
                auto weight = [&](const VertexSet & side) {
                    size_t w = 0;
                    for (auto & v : side) {
                        if (shared.contains(v))
                            continue;
                        if (pre.contains(v))
                            w += _k;
                        else if (auto it = forbidden.find(v); it != forbidden.end())
                            w += it->second.size();
                    }
                    return w;
                };
                auto w1 = weight(left), w2 = weight(right);
                bool heavy_left = w1 >= w2;
                auto & heavy = heavy_left ? glue->left : glue->right;
                auto & light = heavy_left ? glue->right : glue->left;
                auto & heavy_set = heavy_left ? left : right;
                auto & light_set = heavy_left ? right : left;
                step.heavy = heavy_left ? "left" : "right";
                step.heavy_weight = std::max(w1, w2);
                step.light_weight = std::min(w1, w2);
                if (step.light_weight > _k * _k - 1)
                    throw InvariantError("small-cutset colouring at " + path + ": lighter side weight "
                            + std::to_string(step.light_weight) + " exceeds k^2-1");

                std::set<Color> light_precolours;
                for (auto & [v, c] : pre)
                    if (light_set.contains(v) && ! shared.contains(v))
                        light_precolours.insert(c);

                Coloring pre1;
                Forbidden f1;
                for (auto & v : heavy_set) {
                    if (auto it = pre.find(v); it != pre.end()) {
                        pre1.emplace(v, it->second);
                        continue;
                    }
                    std::set<Color> banned;
                    if (auto it = forbidden.find(v); it != forbidden.end())
                        banned = it->second;
                    if (shared.contains(v))
                        banned.insert(light_precolours.begin(), light_precolours.end());
                    if (! banned.empty())
                        f1.emplace(v, std::move(banned));
                }
                step.heavy_budget = budget(pre1, f1);
                auto step_index = _trace.steps.size();
                _trace.steps.push_back(step);

                auto first = solve(heavy, path + (heavy_left ? ".left" : ".right"), pre1, f1, palette);

                Coloring pre2;
                Forbidden f2;
                for (auto & v : light_set) {
                    if (shared.contains(v))
                        pre2.emplace(v, first.at(v));
                    else if (auto it = pre.find(v); it != pre.end())
                        pre2.emplace(v, it->second);
                    else if (auto it = forbidden.find(v); it != forbidden.end() && ! it->second.empty())
                        f2.emplace(v, it->second);
                }
                _trace.steps[step_index].light_budget = budget(pre2, f2);

                auto second = solve(light, path + (heavy_left ? ".right" : ".left"), pre2, f2, palette);
                first.insert(second.begin(), second.end());
                return first;
            }

        private:
            BoundPtr _f;
            unsigned _k;
            size_t _limit;
            const SynthesisOptions & _opts;
            KGlueTrace & _trace;

            auto budget(const Coloring & pre, const Forbidden & forbidden) const -> size_t
            {
                size_t total = _k * pre.size();
                for (auto & [v, s] : forbidden)
                    if (! pre.contains(v))
                        total += s.size();
                return total;
            }

            auto certify_leaves(const OpTree & t, const string & path) -> void
            {
                std::visit(Overloaded{[&](const LeafNode & n) { certified_colouring(n.graph, _f, path, "leaf", _opts); },
                                   [&](const CliqueGlueNode & n) {
                                       certify_leaves(n.left, path + ".left");
                                       certify_leaves(n.right, path + ".right");
                                   },
                                   [&](const auto &) {
                                       throw InvariantError("small-cutset colouring: unexpected node at " + path);
                                   }},
                        t->node);
            }

            auto leaf(const OpTree & t, const string & path, const Coloring & pre, const Forbidden & forbidden,
                    const std::set<Color> & palette, KGlueStep & step) -> Coloring
            {
                step.leaf = true;
                auto h = realize(t);
                certify_leaves(t, path);

                std::set<Color> used;
                for (auto & [v, c] : pre)
                    used.insert(c);
                for (auto & [v, s] : forbidden)
                    used.insert(s.begin(), s.end());
                vector<Color> free;
                for (auto c : palette)
                    if (! used.contains(c))
                        free.push_back(c);

                VertexSet fixed;
                for (auto & [v, c] : pre)
                    fixed.insert(v);
                auto rest = optimal_coloring(delete_vertices(h, fixed), _opts.budget);
                step.free_colors = free.size();
                step.used_colors = rest.chi;
                _trace.steps.push_back(step);
                if (rest.chi > free.size())
                    throw InvariantError("small-cutset colouring at " + path + ": " + std::to_string(free.size())
                            + " free colours cannot hold chromatic number " + std::to_string(rest.chi));

                Coloring out = pre;
                for (auto & [v, c] : rest.coloring)
                    out.emplace(v, free[c]);
                return out;
            }
        };

        auto trace_path_json(const Interval & v) -> json
        {
            return json{{"lo", to_string(v.lo)}, {"hi", to_string(v.hi)}};
        }
    }

    auto tree_clique_number(const OpTree & t, std::uint64_t budget) -> unsigned
    {
        OmegaCache cache(budget);
        return cache(t);
    }

    auto color_by_depth(const OpTree & t, const BoundPtr & f, const SynthesisOptions & opts) -> SynthesisResult
    {
        require_substitution_tree(t, "color_by_depth");
        realize(t);
        auto d = substitution_depth(t);

        SynthesisResult result;
        result.coloring = DepthColourer(f, opts).colour(t, "$");
        auto & cert = result.certificate;
        cert.method = "depth";
        cert.bound = depth_power_bound(f, static_cast<unsigned>(d + 1));
        cert.omega = tree_clique_number(t, opts.budget);
        cert.colors_used = colors_used(result.coloring);
        cert.trace = json{{"representation_depth", d}, {"omega", cert.omega}};
        certify(cert, opts.precision_bits);
        return result;
    }

    auto poly_alpha_exponent(unsigned omega) -> unsigned
    {
        if (omega < 4)
            throw DomainError("the bucket scheme needs clique number at least 4");
        BigInt w(omega);
        for (unsigned m = 1;; ++m) {
            auto lower = power(BigInt(5), m) * 2, middle = power(BigInt(4), m) * w, upper = power(BigInt(6), m) * 2;
            if (lower > middle)
                throw InvariantError("no alpha in [5/4, 3/2] with alpha^m = omega/2");
            if (middle <= upper)
                return m;
        }
    }

    auto poly_bucket(unsigned omega, unsigned m, unsigned omega_i) -> unsigned
    {
        if (2 * omega_i > omega)
            return 0;
        if (omega_i == 1)
            return m + 1;
        BigInt w(omega), twice(2 * omega_i);
        auto wm = power(w, m), tm = power(twice, m);
        for (unsigned j = 1; j <= m; ++j)
            if (wm * power(BigInt(2), j) < tm * power(w, j) && tm * power(w, j - 1) <= wm * power(BigInt(2), j - 1))
                return j;
        throw InvariantError("clique number " + std::to_string(omega_i) + " falls in no bucket");
    }

    auto poly_block_reach(unsigned omega, unsigned m, unsigned omega_i) -> unsigned
    {
        if (omega_i >= omega)
            throw DomainError("block reach needs omega_i < omega");
        BigInt w(omega), gap(2 * (omega - omega_i));
        auto wm = power(w, m), gm = power(gap, m);
        for (unsigned s = 1; s <= 64 * (m + 1); ++s)
            if (wm * power(BigInt(2), s) < gm * power(w, s))
                return s;
        throw InvariantError("block reach did not terminate");
    }

    auto to_json(const PolyTrace & t) -> json
    {
        json nodes = json::array();
        for (auto & n : t.nodes) {
            json j{{"path", n.path}, {"omega", n.omega}, {"A", n.a}, {"B", poly_star_b(n.a)}, {"depth", n.depth},
                    {"fallback", n.fallback}, {"colors", n.colors}, {"g", n.g_value.str()}};
            if (! n.fallback) {
                j["m"] = n.m;
                j["alpha"] = {{"omega", n.omega}, {"m", n.m}};
                j["child_omega"] = n.child_omega;
                j["buckets"] = n.buckets;
                j["bucket_colors"] = n.bucket_colors;
                j["bucket_clique"] = n.bucket_clique;
                j["disjoint_total"] = n.disjoint_total;
                json blocks = json::array();
                for (auto & b : n.blocks)
                    blocks.push_back({{"vertex", b.vertex}, {"omega_i", b.omega_i}, {"s_i", b.s_i}, {"p", to_string(b.p)},
                            {"neighbour_buckets", b.neighbour_buckets}, {"block_colors", b.block_colors},
                            {"neighbour_bucket_colors", b.neighbour_bucket_colors}, {"P", b.total}});
                j["blocks"] = blocks;
            }
            nodes.push_back(std::move(j));
        }
        return json{{"nodes", nodes}};
    }

    auto color_poly(const OpTree & t, unsigned a, const SynthesisOptions & opts) -> PolyResult
    {
        if (a == 0)
            throw DomainError("color_poly needs a positive exponent");
        require_substitution_tree(t, "color_poly");
        realize(t);

        PolyResult result;
        OmegaCache omega(opts.budget);
        result.coloring = PolyColourer(a, opts, omega, result.trace).colour(t, "$");
        auto & cert = result.certificate;
        cert.method = "poly";
        cert.bound = poly_star_bound(a);
        cert.omega = omega(t);
        cert.colors_used = colors_used(result.coloring);
        cert.trace = to_json(result.trace);
        certify(cert, opts.precision_bits);
        return result;
    }

    auto to_json(const SupermultTrace & t) -> json
    {
        json nodes = json::array();
        for (auto & n : t.nodes) {
            json buckets = json::array();
            for (auto & b : n.buckets)
                buckets.push_back({{"j", b.j}, {"vertices", b.vertices}, {"clique", b.clique}, {"colors", b.colors},
                        {"bound", trace_path_json(b.bound)}});
            nodes.push_back({{"path", n.path}, {"omega", n.omega}, {"large", n.large}, {"large_colors", n.large_colors},
                    {"large_bound", trace_path_json(n.large_bound)}, {"buckets", buckets}, {"colors", n.colors},
                    {"g", trace_path_json(n.g_value)}});
        }
        return json{{"nodes", nodes}};
    }

    auto color_supermult(const OpTree & t, const BoundPtr & f, const SynthesisOptions & opts) -> SupermultResult
    {
        require_substitution_tree(t, "color_supermult");
        realize(t);
        OmegaCache omega(opts.budget);
        auto w = omega(t);
        if (! check_supermultiplicative(f, std::max(w, 16u)))
            throw DomainError("bound " + format_bound(f) + " is not supermultiplicative");

        SupermultResult result;
        result.coloring = SupermultColourer(f, opts, omega, result.trace).colour(t, "$");
        auto & cert = result.certificate;
        cert.method = "supermult";
        cert.bound = supermult_star_bound(f);
        cert.omega = w;
        cert.colors_used = colors_used(result.coloring);
        cert.trace = to_json(result.trace);
        certify(cert, opts.precision_bits);
        return result;
    }

    auto merge_on_clique(const Graph & g, const Coloring & c1, const Coloring & c2, const VertexSet & shared) -> Coloring
    {
        VertexSet s1, s2;
        for (auto & [v, c] : c1)
            s1.insert(v);
        for (auto & [v, c] : c2)
            s2.insert(v);
        for (auto & v : shared)
            if (! s1.contains(v) || ! s2.contains(v))
                throw DomainError("merge_on_clique: shared vertex " + v + " is not coloured on both sides");
        if (! is_clique(g, shared))
            throw DomainError("merge_on_clique: shared set is not a clique");
        if (! is_proper(induced_subgraph(g, s1), c1) || ! is_proper(induced_subgraph(g, s2), c2))
            throw DomainError("merge_on_clique: a side colouring is improper");

        bool first_big = colors_used(c1) >= colors_used(c2);
        auto & big = first_big ? c1 : c2;
        auto & small = first_big ? c2 : c1;

        std::map<Color, Color> rename;
        std::set<Color> taken;
        for (auto & v : shared) {
            rename[small.at(v)] = big.at(v);
            taken.insert(big.at(v));
        }
        std::set<Color> big_colours, small_colours;
        for (auto & [v, c] : big)
            big_colours.insert(c);
        for (auto & [v, c] : small)
            small_colours.insert(c);
        auto next = big_colours.begin();
        Color fresh = big_colours.empty() ? 0 : *big_colours.rbegin() + 1;
        for (auto c : small_colours) {
            if (rename.contains(c))
                continue;
            while (next != big_colours.end() && taken.contains(*next))
                ++next;
            Color target = next != big_colours.end() ? *next++ : fresh++;
            rename[c] = target;
            taken.insert(target);
        }

        Coloring out = big;
        for (auto & [v, c] : small)
            out.emplace(v, rename.at(c));
        return out;
    }

    auto constraint_budget(const ColoringConstraint & c, unsigned k) -> size_t
    {
        size_t total = static_cast<size_t>(k) * c.precoloring.size();
        for (auto & [v, s] : c.forbidden)
            if (! c.precoloring.contains(v))
                total += s.size();
        return total;
    }

    auto is_appropriate(const Coloring & c, const ColoringConstraint & constraint) -> bool
    {
        for (auto & [v, colour] : c)
            if (! constraint.palette.contains(colour))
                return false;
        for (auto & [v, colour] : constraint.precoloring) {
            auto it = c.find(v);
            if (it == c.end() || it->second != colour)
                return false;
        }
        for (auto & [v, banned] : constraint.forbidden) {
            if (constraint.precoloring.contains(v))
                continue;
            auto it = c.find(v);
            if (it != c.end() && banned.contains(it->second))
                return false;
        }
        return true;
    }

    auto to_json(const KGlueTrace & t) -> json
    {
        json steps = json::array();
        for (auto & s : t.steps) {
            json j{{"path", s.path}, {"leaf", s.leaf}, {"budget", s.budget}, {"precolored", s.precolored}};
            if (s.leaf) {
                j["free_colors"] = s.free_colors;
                j["used_colors"] = s.used_colors;
            }
            else {
                j["heavy"] = s.heavy;
                j["heavy_weight"] = s.heavy_weight;
                j["light_weight"] = s.light_weight;
                j["heavy_budget"] = s.heavy_budget;
                j["light_budget"] = s.light_budget;
            }
            steps.push_back(std::move(j));
        }
        return json{{"k", t.k}, {"palette", t.palette}, {"budget_limit", 2 * t.k * t.k - 1}, {"steps", steps}};
    }

    auto color_kglue(const OpTree & t, const BoundPtr & f, const std::optional<ColoringConstraint> & constraint, unsigned k,
            const SynthesisOptions & opts) -> KGlueResult
    {
        if (node_kinds(t).substitute)
            throw DomainError("color_kglue does not accept substitution nodes: mixing substitution with small-cutset "
                              "gluing is not supported");
        auto g = realize(t);
        auto tree = clique_glue_above_k_glue(t) ? normalize_glue_order(t) : t;
        k = std::max({k, max_k(tree), 1u});

        KGlueResult result;
        auto & trace = result.trace;
        trace.k = k;
        auto omega = tree_clique_number(tree, opts.budget);
        auto floor_f = floor_eval(f, omega, opts.precision_bits);
        if (floor_f < 0)
            floor_f = 0;
        auto needed = floor_f.convert_to<size_t>() + 2 * k * k - 1;

        ColoringConstraint c;
        if (constraint) {
            c = *constraint;
            if (c.palette.size() < needed)
                throw DomainError("constraint palette has " + std::to_string(c.palette.size()) + " colours, fewer than "
                        + std::to_string(needed));
            if (constraint_budget(c, k) > 2 * k * k - 1)
                throw DomainError("constraint budget exceeds 2k^2-1");
            for (auto & [v, colour] : c.precoloring)
                if (! g.contains(v) || ! c.palette.contains(colour))
                    throw DomainError("precoloured vertex " + v + " is unknown or uses a colour outside the palette");
            VertexSet k_set;
            for (auto & [v, colour] : c.precoloring)
                k_set.insert(v);
            if (! is_proper(induced_subgraph(g, k_set), c.precoloring))
                throw DomainError("the precolouring is not proper");
            for (auto & [v, banned] : c.forbidden)
                if (! g.contains(v))
                    throw DomainError("forbidden colours given for unknown vertex " + v);
        }
        else
            for (size_t i = 0; i < needed; ++i)
                c.palette.insert(static_cast<Color>(i));
        trace.palette = c.palette.size();

        KGlueColourer::Forbidden forbidden;
        for (auto & [v, banned] : c.forbidden)
            if (! c.precoloring.contains(v) && ! banned.empty())
                forbidden.emplace(v, banned);

        result.coloring = KGlueColourer(f, k, opts, trace).solve(tree, "$", c.precoloring, forbidden, c.palette);
        if (! is_appropriate(result.coloring, c))
            throw InvariantError("small-cutset colouring is not appropriate for its constraint");

        auto & cert = result.certificate;
        cert.method = "kglue";
        cert.bound = kglue_bound(f, k);
        cert.omega = omega;
        cert.colors_used = colors_used(result.coloring);
        cert.trace = to_json(trace);
        certify(cert, opts.precision_bits);
        return result;
    }

    namespace
    {
        struct Reduced
        {
            OpTree tree;
            unsigned chi;
        };

        auto reduce(const OpTree & t, std::uint64_t budget) -> Reduced
        {
            return std::visit(
                Overloaded{[&](const LeafNode & n) -> Reduced { return {t, chromatic_number(n.graph, budget)}; },
                        [&](const SubstituteNode & n) -> Reduced {
                            std::map<VertexId, OpTree> kids;
                            for (auto & [v, c] : n.children)
                                kids.emplace(v, reduce(c, budget).tree);
                            auto tree = make_substitute(n.base, std::move(kids));
                            return {tree, chromatic_number(realize(tree), budget)};
                        },
                        [&](const CliqueGlueNode & n) -> Reduced {
                            auto left = reduce(n.left, budget), right = reduce(n.right, budget);
                            return right.chi > left.chi ? right : left;
                        },
                        [&](const KGlueNode &) -> Reduced {
                            throw DomainError("reduce_to_base accepts Leaf, Substitute and CliqueGlue nodes only");
                        }},
                t->node);
        }
    }

    auto reduce_to_base(const OpTree & t, std::uint64_t budget) -> Reduction
    {
        realize(t);
        Reduction r;
        r.witness_tree = reduce(t, budget).tree;
        r.witness = realize(r.witness_tree);
        for (auto & v : r.witness.vertices())
            r.embedding.emplace(v, v);
        return r;
    }
}

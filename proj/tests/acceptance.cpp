// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only if every criterion passes.

#include <chibound/bounds.hpp>
#include <chibound/generators.hpp>
#include <chibound/oracle.hpp>
#include <chibound/optree.hpp>
#include <chibound/synthesis.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

using namespace chibound;

namespace
{
    struct Outcome
    {
        bool pass = true;
        std::string detail;
        std::vector<std::string> problems;

        auto require(bool ok, const std::string & what) -> void
        {
            if (! ok) {
                pass = false;
                if (problems.size() < 5)
                    problems.push_back(what);
            }
        }
    };

    auto run_criterion(int number, const std::string & name, std::optional<double> limit, const std::function<Outcome()> & body)
            -> bool
    {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        }
        catch (const std::exception & e) {
            o.pass = false;
            o.problems.push_back(std::string("exception: ") + e.what());
        }
        auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limit && seconds >= *limit) {
            o.pass = false;
            o.problems.push_back("runtime above limit");
        }

        std::ostringstream line;
        line << std::fixed << std::setprecision(2);
        line << (o.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << number << "  " << name << ": " << o.detail
             << " [" << seconds << " s";
        if (limit)
            line << ", limit " << std::setprecision(0) << *limit << " s";
        line << "]";
        std::cout << line.str() << "\n";
        for (auto & p : o.problems)
            std::cout << "      " << p << "\n";
        std::cout.flush();
        return o.pass;
    }

    // test-side checks, written without the library's helpers

    auto proper(const Graph & g, const Coloring & c) -> bool
    {
        for (auto & v : g.vertices())
            if (! c.count(v))
                return false;
        for (auto & [u, v] : g.edges())
            if (c.at(u) == c.at(v))
                return false;
        return c.size() == g.order();
    }

    auto distinct(const Coloring & c) -> std::size_t
    {
        std::set<Color> s;
        for (auto & [v, colour] : c)
            s.insert(colour);
        return s.size();
    }

    auto ipow(std::uint64_t b, unsigned e) -> BigInt
    {
        BigInt r = 1;
        for (unsigned i = 0; i < e; ++i)
            r *= b;
        return r;
    }

    auto smallest_m(unsigned omega) -> unsigned
    {
        for (unsigned m = 1;; ++m)
            if (ipow(5, m) * 2 <= ipow(4, m) * omega && ipow(4, m) * omega <= ipow(6, m) * 2)
                return m;
    }

    // bucket j holds omega/(2 alpha^j) < omega_i <= omega/(2 alpha^(j-1)), alpha^m = omega/2
    auto expected_bucket(unsigned omega, unsigned m, unsigned wi) -> unsigned
    {
        if (2 * wi > omega)
            return 0;
        if (wi == 1)
            return m + 1;
        for (unsigned j = 1; j <= m; ++j) {
            auto above = ipow(omega, m) * ipow(2, j) < ipow(2 * wi, m) * ipow(omega, j);
            auto below = ipow(2 * wi, m) * ipow(omega, j - 1) <= ipow(omega, m) * ipow(2, j - 1);
            if (above && below)
                return j;
        }
        return m + 2;
    }

    // least s with omega/(2 alpha^s) < omega - omega_i
    auto expected_reach(unsigned omega, unsigned m, unsigned wi) -> unsigned
    {
        for (unsigned s = 1;; ++s)
            if (ipow(omega, m) * ipow(2, s) < ipow(2 * (omega - wi), m) * ipow(omega, s))
                return s;
    }

    // mirrors the trace paths of the polynomial colouring
    auto collect_components(const OpTree & t, const std::string & path, std::map<std::string, OpTree> & out) -> void
    {
        auto n = std::get_if<SubstituteNode>(&t->node);
        if (! n)
            return;
        auto comps = connected_components(n->base);
        for (auto & comp : comps) {
            if (comp.size() == 1) {
                auto & v = *comp.begin();
                collect_components(n->children.at(v), path + ".children[" + v + "]", out);
                continue;
            }
            auto cpath = comps.size() > 1 ? path + "{" + *comp.begin() + "}" : path;
            std::map<VertexId, OpTree> kids;
            for (auto & v : comp)
                kids.emplace(v, n->children.at(v));
            out[cpath] = make_substitute(induced_subgraph(n->base, comp), kids);
            for (auto & v : comp)
                collect_components(n->children.at(v), cpath + ".children[" + v + "]", out);
        }
    }

    auto has_clique_glue_above_k_glue(const OpTree & t, bool below_clique = false) -> bool
    {
        return std::visit(
            [&](auto & n) -> bool {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, LeafNode>)
                    return false;
                else if constexpr (std::is_same_v<N, SubstituteNode>) {
                    for (auto & [v, c] : n.children)
                        if (has_clique_glue_above_k_glue(c, below_clique))
                            return true;
                    return false;
                }
                else if constexpr (std::is_same_v<N, CliqueGlueNode>)
                    return has_clique_glue_above_k_glue(n.left, true) || has_clique_glue_above_k_glue(n.right, true);
                else
                    return below_clique || has_clique_glue_above_k_glue(n.left, false)
                            || has_clique_glue_above_k_glue(n.right, false);
            },
            t->node);
    }

    auto only_leaf_and_substitute(const OpTree & t) -> bool
    {
        if (std::holds_alternative<LeafNode>(t->node))
            return true;
        auto n = std::get_if<SubstituteNode>(&t->node);
        if (! n)
            return false;
        for (auto & [v, c] : n->children)
            if (! only_leaf_and_substitute(c))
                return false;
        return true;
    }

    auto connected_without(const Graph & g, std::optional<std::size_t> removed) -> bool
    {
        std::vector<bool> seen(g.order());
        std::vector<std::size_t> stack;
        std::size_t start = (removed && *removed == 0) ? 1 : 0;
        seen[start] = true;
        stack.push_back(start);
        std::size_t reached = 1;
        while (! stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : g.neighbours(v))
                if (! seen[w] && (! removed || w != *removed)) {
                    seen[w] = true;
                    ++reached;
                    stack.push_back(w);
                }
        }
        return reached == g.order() - (removed ? 1 : 0);
    }

    auto complete_or_two_connected(const Graph & g) -> bool
    {
        if (g.size() * 2 == g.order() * (g.order() - 1))
            return true;
        if (g.order() < 3 || ! connected_without(g, std::nullopt))
            return false;
        for (std::size_t v = 0; v < g.order(); ++v)
            if (! connected_without(g, v))
                return false;
        return true;
    }

    auto leaves_of(const OpTree & t, std::vector<Graph> & out) -> void
    {
        std::visit(
            [&](auto & n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, LeafNode>)
                    out.push_back(n.graph);
                else if constexpr (std::is_same_v<N, SubstituteNode>) {
                    for (auto & [v, c] : n.children)
                        leaves_of(c, out);
                }
                else {
                    leaves_of(n.left, out);
                    leaves_of(n.right, out);
                }
            },
            t->node);
    }

    struct CographRun
    {
        std::uint64_t seed;
        unsigned omega;
        int depth;
        std::size_t colours;
    };

    std::vector<CographRun> cograph_corpus;

    auto cograph_suite() -> Outcome
    {
        Outcome o;
        std::size_t max_order = 0;
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            auto t = random_cograph_tree(seed, 20);
            auto g = realize(t);
            max_order = std::max(max_order, g.order());
            auto r = color_by_depth(t, monomial_bound(1));
            auto omega = clique_number(g);
            auto chi = chromatic_number(g);
            auto d = substitution_depth(t);
            auto colours = distinct(r.coloring);
            auto tag = "seed " + std::to_string(seed);
            o.require(g.order() <= 20, tag + ": more than 20 vertices");
            o.require(proper(g, r.coloring), tag + ": improper colouring");
            o.require(BigInt(colours) <= ipow(omega, d + 1), tag + ": colours above omega^(d+1)");
            o.require(chi == omega, tag + ": chi differs from omega");
            cograph_corpus.push_back({seed, omega, d, colours});
        }
        o.detail = "200 trees, up to " + std::to_string(max_order) + " vertices";
        return o;
    }

    auto depth_bounds() -> Outcome
    {
        Outcome o;
        if (cograph_corpus.size() != 200)
            throw std::runtime_error("cograph corpus unavailable");
        auto f = monomial_bound(1);
        int deepest = 0;
        for (auto & run : cograph_corpus) {
            auto tag = "seed " + std::to_string(run.seed);
            auto fw = eval(f, run.omega);
            BigInt floor_f = numerator(fw.lo) / denominator(fw.lo);
            o.require(run.omega >= static_cast<unsigned>(run.depth) + 1, tag + ": omega below d+1");
            o.require(BigInt(run.colours) <= pow(floor_f, static_cast<unsigned>(run.depth + 1)),
                    tag + ": colours above floor(f(omega))^(d+1)");
            deepest = std::max(deepest, run.depth);
        }
        o.detail = "200 trees, f(x)=x, depth up to " + std::to_string(deepest);
        return o;
    }

    auto poly_ledger() -> Outcome
    {
        Outcome o;
        std::size_t bucketed = 0, blocks = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            auto tag = "seed " + std::to_string(seed);
            auto t = random_poly_tree(seed);
            auto g = realize(t);
            auto omega = clique_number(g);
            o.require(omega >= 4 && omega <= 12, tag + ": omega outside [4,12]");
            auto r = color_poly(t, 1);
            o.require(proper(g, r.coloring), tag + ": improper colouring");
            o.require(BigInt(distinct(r.coloring)) <= ipow(omega, 14), tag + ": colours above omega^14");
            o.require(r.certificate.verdict == Verdict::pass, tag + ": certificate did not pass");

            std::map<std::string, OpTree> components;
            collect_components(t, "$", components);
            for (auto & node : r.trace.nodes) {
                if (node.fallback)
                    continue;
                ++bucketed;
                auto at = tag + " " + node.path;
                auto found = components.find(node.path);
                if (found == components.end()) {
                    o.require(false, at + ": trace path matches no component");
                    continue;
                }
                auto & sub = std::get<SubstituteNode>(found->second->node);
                auto w = clique_number(realize(found->second));
                o.require(node.omega == w, at + ": omega differs from the oracle");
                auto m = smallest_m(w);
                o.require(node.m == m, at + ": m is not the smallest valid exponent");
                auto g_value = ipow(w, 14);
                o.require(node.g_value == g_value, at + ": g(omega) differs from omega^14");

                std::map<unsigned, VertexSet> bucket;
                for (auto & [v, child] : sub.children) {
                    auto wi = clique_number(realize(child));
                    o.require(node.child_omega.at(v) == wi, at + ": child clique number differs for " + v);
                    auto j = expected_bucket(w, m, wi);
                    o.require(j <= m + 1, at + ": no bucket for " + v);
                    o.require(node.buckets.at(v) == j, at + ": " + v + " is in the wrong bucket");
                    bucket[j].insert(v);
                }
                o.require(is_stable(sub.base, bucket[0]), at + ": large-clique bucket is not stable");

                std::size_t disjoint = 0;
                for (unsigned j = 1; j <= m + 1; ++j) {
                    disjoint += node.bucket_colors[j];
                    if (j > m || bucket[j].empty())
                        continue;
                    auto c = clique_number(induced_subgraph(sub.base, bucket[j]));
                    o.require(ipow(c, m) * ipow(2, j) <= ipow(2, m) * ipow(w, j),
                            at + ": bucket " + std::to_string(j) + " clique above 2 alpha^j");
                }
                o.require(node.disjoint_total == disjoint, at + ": disjoint total differs from the bucket sum");
                o.require(BigInt(disjoint) <= g_value, at + ": disjoint palettes above g(omega)");

                o.require(node.blocks.size() == bucket[0].size(), at + ": missing V0 blocks");
                for (auto & b : node.blocks) {
                    ++blocks;
                    auto s = expected_reach(w, m, b.omega_i);
                    o.require(b.omega_i == node.child_omega.at(b.vertex), at + ": block clique number");
                    o.require(b.s_i == s, at + ": block reach differs");
                    o.require(b.p == 1 - Rational(b.omega_i, w), at + ": p differs");
                    std::set<unsigned> near;
                    auto bi = *sub.base.index_of(b.vertex);
                    for (auto x : sub.base.neighbours(bi))
                        near.insert(node.buckets.at(sub.base.id(x)));
                    o.require(std::set<unsigned>(b.neighbour_buckets.begin(), b.neighbour_buckets.end()) == near,
                            at + ": neighbour buckets differ");
                    std::size_t total = b.block_colors;
                    for (auto j : near) {
                        o.require(j != 0 && (j > m || j >= s), at + ": block meets bucket " + std::to_string(j));
                        total += node.bucket_colors[j];
                    }
                    o.require(b.total == total, at + ": P differs from its parts");
                    o.require(BigInt(total) <= g_value, at + ": P above g(omega)");
                }
            }
        }
        o.require(bucketed > 0, "no recursion node used the bucket scheme");
        o.detail = "100 trees, " + std::to_string(bucketed) + " bucket nodes, " + std::to_string(blocks) + " V0 blocks";
        return o;
    }

    auto small_cutsets() -> Outcome
    {
        Outcome o;
        std::size_t glue_steps = 0;
        for (unsigned k = 1; k <= 3; ++k)
            for (std::uint64_t seed = 1; seed <= 200; ++seed) {
                auto tag = "k " + std::to_string(k) + " seed " + std::to_string(seed);
                auto t = random_kglue_tree(seed, k);
                auto g = realize(t);
                auto omega = clique_number(g);
                auto limit = 2 * k * k - 1;
                o.require(max_k(t) <= k, tag + ": glue larger than k");
                auto r = color_kglue(t, monomial_bound(1), std::nullopt, k);
                o.require(proper(g, r.coloring), tag + ": improper colouring");
                o.require(distinct(r.coloring) <= omega + limit, tag + ": colours above omega + 2k^2 - 1");
                o.require(r.trace.palette == omega + limit, tag + ": palette size");
                for (auto & step : r.trace.steps) {
                    o.require(step.budget <= limit, tag + " " + step.path + ": budget above 2k^2-1");
                    if (step.leaf)
                        continue;
                    ++glue_steps;
                    o.require(step.light_weight <= k * k - 1, tag + " " + step.path + ": lighter side above k^2-1");
                    o.require(step.light_weight <= step.heavy_weight, tag + " " + step.path + ": sides swapped");
                    o.require(step.heavy_budget <= limit && step.light_budget <= limit,
                            tag + " " + step.path + ": child budget above 2k^2-1");
                }
            }
        o.detail = "600 trees (200 each for k = 1, 2, 3), " + std::to_string(glue_steps) + " glue steps";
        return o;
    }

    auto mycielski() -> Outcome
    {
        Outcome o;
        std::string values;
        for (unsigned t = 0; t <= 3; ++t) {
            auto g = mycielski_tower(t);
            auto chi = chromatic_number(g);
            auto omega = clique_number(g);
            o.require(chi == t + 2, "t " + std::to_string(t) + ": chi " + std::to_string(chi));
            o.require(omega == 2, "t " + std::to_string(t) + ": omega " + std::to_string(omega));
            values += (values.empty() ? "" : ", ") + ("chi(M^" + std::to_string(t) + ") = " + std::to_string(chi));
        }
        o.detail = values + ", omega = 2";
        return o;
    }

    auto fractional() -> Outcome
    {
        Outcome o;
        auto c5 = cycle_graph(5);
        auto f2 = lex_power(c5, 2);
        auto a = fractional_chromatic_number(c5);
        auto b = fractional_chromatic_number(f2);
        o.require(a == Rational(5, 2), "chi_f(C5) = " + to_string(a));
        o.require(b == Rational(25, 4), "chi_f(F_2) = " + to_string(b));
        for (unsigned i = 1; i <= 2; ++i)
            o.require(clique_number(lex_power(c5, i)) == (1u << i), "omega(F_" + std::to_string(i) + ")");
        o.detail = "chi_f(C5) = " + to_string(a) + ", chi_f(F_2) = " + to_string(b) + ", omega(F_i) = 2^i";
        return o;
    }

    auto switch_order() -> Outcome
    {
        Outcome o;
        std::size_t rewritten = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            auto tag = "seed " + std::to_string(seed);
            auto t = random_glue_tree(seed);
            rewritten += has_clique_glue_above_k_glue(t);
            auto n = normalize_glue_order(t);
            o.require(validate(n).empty(), tag + ": normalized tree is invalid");
            o.require(realize(n) == realize(t), tag + ": realization changed");
            o.require(! has_clique_glue_above_k_glue(n), tag + ": clique glue above a k-glue remains");
        }
        o.detail = "100 trees, " + std::to_string(rewritten) + " needed rewriting";
        return o;
    }

    auto gluing_reduction() -> Outcome
    {
        Outcome o;
        std::size_t glued = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            auto tag = "seed " + std::to_string(seed);
            auto t = random_reducible_tree(seed, 18);
            glued += node_kinds(t).clique_glue;
            auto g = realize(t);
            o.require(g.order() <= 18, tag + ": more than 18 vertices");
            auto r = reduce_to_base(t);
            o.require(only_leaf_and_substitute(r.witness_tree), tag + ": witness tree has glue nodes");
            o.require(realize(r.witness_tree) == r.witness, tag + ": witness is not its tree's realization");
            std::set<VertexId> image;
            bool induced = r.embedding.size() == r.witness.order();
            for (auto & u : r.witness.vertices()) {
                if (! r.embedding.count(u) || ! g.contains(r.embedding.at(u))) {
                    induced = false;
                    break;
                }
                image.insert(r.embedding.at(u));
                for (auto & v : r.witness.vertices())
                    if (u != v && r.witness.adjacent(u, v) != g.adjacent(r.embedding.at(u), r.embedding.at(v)))
                        induced = false;
            }
            o.require(induced && image.size() == r.witness.order(), tag + ": embedding is not an induced subgraph");
            o.require(chromatic_number(r.witness) == chromatic_number(g), tag + ": chi differs");
        }
        o.detail = "100 trees, " + std::to_string(glued) + " with clique glues";
        return o;
    }

    auto high_connectivity() -> Outcome
    {
        Outcome o;
        auto g = mycielski_tower(3);
        auto t = decompose_small_cutsets(g, 1);
        o.require(realize(t) == g, "decomposition does not realize the input");
        std::vector<Graph> leaves;
        leaves_of(t, leaves);
        unsigned best = 0;
        for (auto & leaf : leaves) {
            o.require(complete_or_two_connected(leaf), "a leaf is neither complete nor 2-connected");
            best = std::max(best, chromatic_number(leaf));
        }
        o.require(best >= 3, "no leaf has chi >= 3");
        o.detail = std::to_string(leaves.size()) + (leaves.size() == 1 ? " leaf" : " leaves") + ", largest leaf chi "
                + std::to_string(best);
        return o;
    }

    auto exponential_dominance() -> Outcome
    {
        Outcome o;
        std::size_t passed = 0, inconclusive = 0, violated = 0;
        for (unsigned c = 1; c <= 4; ++c)
            for (unsigned x = 1; x <= 64; ++x) {
                auto v = eval(supermult_star_bound(exponential_bound(c)), x);
                Rational h(ipow(2, (c + 1) * x));
                auto at = "c = " + std::to_string(c) + ", x = " + std::to_string(x);
                if (v.hi <= h)
                    ++passed;
                else if (v.lo <= h) {
                    ++inconclusive;
                    o.require(false, at + ": inconclusive at default precision");
                }
                else {
                    ++violated;
                    std::ostringstream s;
                    s << at << ": f(x) x^(log2 x) >= " << std::setprecision(10) << v.lo.convert_to<double>()
                      << " > 2^((c+1)x) = " << h.convert_to<double>();
                    o.require(false, s.str());
                }
            }
        o.detail = std::to_string(passed) + "/256 dominated, " + std::to_string(violated) + " violated, "
                + std::to_string(inconclusive) + " inconclusive";
        return o;
    }
}

auto main() -> int
{
    bool all = true;
    all &= run_criterion(1, "cograph suite", 60, cograph_suite);
    all &= run_criterion(2, "depth bounds on the cograph corpus", std::nullopt, depth_bounds);
    all &= run_criterion(3, "polynomial bucket ledger", std::nullopt, poly_ledger);
    all &= run_criterion(4, "small cutset colouring", std::nullopt, small_cutsets);
    all &= run_criterion(5, "Mycielski towers", 120, mycielski);
    all &= run_criterion(6, "fractional chromatic numbers", 300, fractional);
    all &= run_criterion(7, "glue order rewriting", std::nullopt, switch_order);
    all &= run_criterion(8, "base-class reduction", std::nullopt, gluing_reduction);
    all &= run_criterion(9, "small cutset decomposition of M^3", std::nullopt, high_connectivity);
    all &= run_criterion(10, "exponential dominance sweep", std::nullopt, exponential_dominance);
    std::cout << (all ? "all criteria passed" : "some criteria failed") << "\n";
    return all ? 0 : 1;
}

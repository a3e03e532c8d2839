#include "cli.hpp"

#include <chibound/bounds.hpp>
#include <chibound/errors.hpp>
#include <chibound/generators.hpp>
#include <chibound/oracle.hpp>
#include <chibound/optree.hpp>
#include <chibound/synthesis.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using std::string;
using std::vector;

namespace chibound::cli
{
    namespace
    {
        auto open_input(const string & path) -> std::ifstream
        {
            std::ifstream in(path);
            if (! in)
                throw DomainError("cannot read '" + path + "'");
            return in;
        }

        auto load_tree(const string & path) -> OpTree
        {
            auto in = open_input(path);
            return read_tree(in);
        }

        auto load_graph(const string & path) -> Graph
        {
            auto in = open_input(path);
            return read_graph(in);
        }

        auto load_coloring(const string & path) -> Coloring
        {
            auto in = open_input(path);
            return read_coloring(in);
        }

        // Writes to path, or to out when path is empty.
        auto emit(const string & path, std::ostream & out, const std::function<void(std::ostream &)> & write) -> void
        {
            if (path.empty()) {
                write(out);
                return;
            }
            std::ofstream file(path, std::ios::binary);
            if (! file)
                throw DomainError("cannot write '" + path + "'");
            write(file);
        }

        auto exit_for(Verdict v) -> int
        {
            switch (v) {
            case Verdict::pass:
                return ok;
            case Verdict::fail:
                return certification_failed;
            default:
                return inconclusive;
            }
        }

        struct Options
        {
            unsigned precision_bits = default_precision_bits;
            string tree, graph, coloring, output, cert, bound, method = "depth", family;
            unsigned k = 0;
            bool omega = false, chi = false, chif = false;
            int cutset = -1;
            unsigned t = 0, power = 1;
            std::uint64_t seed = 0;
            string kind = "random";
            std::size_t max_vertices = 20;
            unsigned max_depth = 3;
            vector<unsigned> mix{1, 1, 1, 1};
            vector<string> leaves{"complete"};
        };

        auto synthesis_options(const Options & o) -> SynthesisOptions
        {
            return SynthesisOptions{step_budget_from_environment(), o.precision_bits};
        }

        // The certified bound of each method wraps the leaf bound; accept either.
        auto leaf_bound(const BoundPtr & b) -> BoundPtr
        {
            if (auto s = std::get_if<StarPower>(&b->node))
                return s->inner;
            if (auto s = std::get_if<SupermultStar>(&b->node))
                return s->inner;
            if (auto s = std::get_if<KGlueShift>(&b->node))
                return s->inner;
            if (auto s = std::get_if<DepthPower>(&b->node))
                return s->inner;
            return b;
        }

        auto poly_exponent(const BoundPtr & b) -> unsigned
        {
            if (auto s = std::get_if<PolyStar>(&b->node))
                return s->a;
            if (auto p = std::get_if<Polynomial>(&b->node)) {
                auto & c = p->coefficients;
                bool monomial = ! c.empty() && c.back() == 1
                        && std::all_of(c.begin(), c.end() - 1, [](auto & x) { return x == 0; });
                if (monomial && c.size() >= 2)
                    return static_cast<unsigned>(c.size() - 1);
            }
            throw DomainError("--method poly needs a bound of the form x^A or polystar(A)");
        }

        auto color(const Options & o, std::ostream & out) -> int
        {
            auto t = load_tree(o.tree);
            auto bound = parse_bound(o.bound);
            auto opts = synthesis_options(o);
            Coloring c;
            Certificate cert;
            if (o.method == "depth") {
                auto r = color_by_depth(t, leaf_bound(bound), opts);
                c = r.coloring;
                cert = r.certificate;
            }
            else if (o.method == "poly") {
                auto r = color_poly(t, poly_exponent(bound), opts);
                c = r.coloring;
                cert = r.certificate;
            }
            else if (o.method == "supermult") {
                auto r = color_supermult(t, leaf_bound(bound), opts);
                c = r.coloring;
                cert = r.certificate;
            }
            else {
                unsigned k = o.k;
                if (auto s = std::get_if<KGlueShift>(&bound->node); s && k == 0)
                    k = s->k;
                auto r = color_kglue(t, leaf_bound(bound), std::nullopt, k, opts);
                c = r.coloring;
                cert = r.certificate;
            }
            if (! is_proper(realize(t), c))
                throw InvariantError("synthesized colouring is not proper");
            if (! o.output.empty() || o.cert.empty() == false) {
                if (! o.output.empty())
                    emit(o.output, out, [&](std::ostream & s) { write_coloring(s, c); });
                if (! o.cert.empty())
                    emit(o.cert, out, [&](std::ostream & s) { s << certificate_json(cert).dump(2) << "\n"; });
                out << colors_used(c) << " colors, " << verdict_name(cert.verdict) << "\n";
            }
            else
                write_coloring(out, c);
            return exit_for(cert.verdict);
        }

        auto verify(const Options & o, std::ostream & out) -> int
        {
            auto g = load_graph(o.graph);
            auto c = load_coloring(o.coloring);
            for (auto & [v, colour] : c)
                if (! g.contains(v))
                    throw DomainError("coloring names unknown vertex " + v);
            if (! is_proper(g, c)) {
                out << "improper\n";
                return certification_failed;
            }
            auto bound = parse_bound(o.bound);
            auto omega = clique_number(g, step_budget_from_environment());
            auto check = check_bound(bound, omega, colors_used(c), o.precision_bits);
            out << colors_used(c) << " colors, omega " << omega << ", " << verdict_name(check.verdict) << "\n";
            return exit_for(check.verdict);
        }

        auto oracle(const Options & o, std::ostream & out) -> int
        {
            auto g = load_graph(o.graph);
            auto budget = step_budget_from_environment();
            if (o.omega)
                out << clique_number(g, budget) << "\n";
            else if (o.chi)
                out << chromatic_number(g, budget) << "\n";
            else if (o.chif)
                out << to_string(fractional_chromatic_number(g, budget)) << "\n";
            else {
                auto r = min_vertex_cutset(g, static_cast<unsigned>(o.cutset), budget);
                if (! r.found)
                    out << "none\n";
                else {
                    string line;
                    for (auto & v : r.cutset)
                        line += (line.empty() ? "" : " ") + v;
                    out << "cutset " << r.cutset.size() << (line.empty() ? "" : " ") << line << "\n";
                }
            }
            return ok;
        }

        auto generate_tree(const Options & o) -> OpTree
        {
            if (o.kind == "cograph")
                return random_cograph_tree(o.seed, o.max_vertices);
            if (o.kind == "poly")
                return random_poly_tree(o.seed);
            if (o.kind == "kglue")
                return random_kglue_tree(o.seed, std::max(o.k, 1u));
            if (o.kind == "glue")
                return random_glue_tree(o.seed);
            if (o.kind == "reducible")
                return random_reducible_tree(o.seed, o.max_vertices);
            if (o.mix.size() != 4)
                throw DomainError("--mix needs four weights: leaf,substitute,clique_glue,k_glue");
            GenConfig cfg;
            cfg.seed = o.seed;
            cfg.max_vertices = o.max_vertices;
            cfg.max_depth = o.max_depth;
            cfg.mix = {o.mix[0], o.mix[1], o.mix[2], o.mix[3]};
            cfg.leaf_pool = o.leaves;
            cfg.base_pool = o.leaves;
            cfg.k = std::max(o.k, 1u);
            return random_optree(cfg);
        }
    }

    auto run(const vector<string> & args, std::ostream & out, std::ostream & err) -> int
    {
        CLI::App app{"Builds graphs from operation trees, colours them and certifies the colour counts."};
        app.require_subcommand(1);
        Options o;
        app.add_option("--precision-bits", o.precision_bits, "starting precision for interval evaluation")
            ->check(CLI::Range(2u, max_precision_bits));

        auto realize_cmd = app.add_subcommand("realize", "write the graph of a tree");
        realize_cmd->add_option("tree", o.tree)->required();
        realize_cmd->add_option("-o", o.output, "output graph file");

        auto validate_cmd = app.add_subcommand("validate", "check a tree and list every issue");
        validate_cmd->add_option("tree", o.tree)->required();

        auto depth_cmd = app.add_subcommand("depth", "print the substitution depth");
        depth_cmd->add_option("tree", o.tree)->required();

        auto color_cmd = app.add_subcommand("color", "synthesize and certify a colouring");
        color_cmd->add_option("tree", o.tree)->required();
        color_cmd->add_option("--method", o.method)->check(CLI::IsMember({"depth", "poly", "supermult", "kglue"}));
        color_cmd->add_option("--bound", o.bound, "bound expression")->required();
        color_cmd->add_option("--k", o.k);
        color_cmd->add_option("-o", o.output, "output colouring file");
        color_cmd->add_option("--cert", o.cert, "certificate report");

        auto verify_cmd = app.add_subcommand("verify", "check a colouring against a bound");
        verify_cmd->add_option("graph", o.graph)->required();
        verify_cmd->add_option("coloring", o.coloring)->required();
        verify_cmd->add_option("--bound", o.bound)->required();

        auto oracle_cmd = app.add_subcommand("oracle", "exact graph invariants");
        oracle_cmd->add_option("graph", o.graph)->required();
        auto omega_flag = oracle_cmd->add_flag("--omega", o.omega);
        auto chi_flag = oracle_cmd->add_flag("--chi", o.chi);
        auto chif_flag = oracle_cmd->add_flag("--chif", o.chif);
        auto cutset_opt = oracle_cmd->add_option("--cutset", o.cutset, "smallest vertex cutset of size at most k")
                              ->check(CLI::NonNegativeNumber);
        for (auto a : {omega_flag, chi_flag, chif_flag, cutset_opt})
            for (auto b : {omega_flag, chi_flag, chif_flag, cutset_opt})
                if (a != b)
                    a->excludes(b);

        auto gen_cmd = app.add_subcommand("gen", "generate example graphs and trees");
        gen_cmd->require_subcommand(1);
        auto myc_cmd = gen_cmd->add_subcommand("mycielski", "Mycielski tower from K2");
        myc_cmd->add_option("t", o.t)->required();
        auto alt_cmd = gen_cmd->add_subcommand("alt-o1o2", "alternating O1/O2 from K2");
        alt_cmd->add_option("t", o.t)->required();
        auto lex_cmd = gen_cmd->add_subcommand("lexpow", "lexicographic power");
        lex_cmd->add_option("graph", o.graph)->required();
        lex_cmd->add_option("i", o.power)->required();
        auto tree_cmd = gen_cmd->add_subcommand("tree", "random operation tree");
        for (auto c : {myc_cmd, alt_cmd, lex_cmd, tree_cmd})
            c->add_option("-o", o.output, "output file");
        tree_cmd->add_option("--seed", o.seed)->required();
        tree_cmd->add_option("--kind", o.kind)
            ->check(CLI::IsMember({"random", "cograph", "poly", "kglue", "glue", "reducible"}));
        tree_cmd->add_option("--k", o.k);
        tree_cmd->add_option("--max-vertices", o.max_vertices);
        tree_cmd->add_option("--max-depth", o.max_depth);
        tree_cmd->add_option("--mix", o.mix, "leaf,substitute,clique_glue,k_glue weights")->delimiter(',');
        tree_cmd->add_option("--leaves", o.leaves, "leaf families")->delimiter(',');

        auto normalize_cmd = app.add_subcommand("normalize", "push clique glues below small-cutset glues");
        normalize_cmd->add_option("tree", o.tree)->required();
        normalize_cmd->add_option("-o", o.output);

        auto reduce_cmd = app.add_subcommand("reduce", "base-class witness with the same chromatic number");
        reduce_cmd->add_option("tree", o.tree)->required();
        reduce_cmd->add_option("-o", o.output);

        try {
            vector<string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        }
        catch (const CLI::ParseError & e) {
            auto code = app.exit(e, out, err);
            return code == 0 ? ok : input_error;
        }

        try {
            if (*realize_cmd) {
                auto g = realize(load_tree(o.tree));
                emit(o.output, out, [&](std::ostream & s) { write_graph(s, g); });
                return ok;
            }
            if (*validate_cmd) {
                auto issues = validate(load_tree(o.tree));
                for (auto & i : issues)
                    out << i.path << ": " << i.invariant << ": " << i.message << "\n";
                if (issues.empty())
                    out << "ok\n";
                return issues.empty() ? ok : input_error;
            }
            if (*depth_cmd) {
                out << substitution_depth(load_tree(o.tree)) << "\n";
                return ok;
            }
            if (*color_cmd)
                return color(o, out);
            if (*verify_cmd)
                return verify(o, out);
            if (*oracle_cmd) {
                if (! o.omega && ! o.chi && ! o.chif && o.cutset < 0)
                    throw DomainError("oracle needs one of --omega, --chi, --chif, --cutset");
                return oracle(o, out);
            }
            if (*gen_cmd) {
                if (*tree_cmd) {
                    auto t = generate_tree(o);
                    emit(o.output, out, [&](std::ostream & s) { s << format_tree(t); });
                    return ok;
                }
                Graph g;
                if (*myc_cmd)
                    g = mycielski_tower(o.t);
                else if (*alt_cmd)
                    g = alternate_o1_o2(o.t);
                else
                    g = lex_power(load_graph(o.graph), o.power);
                emit(o.output, out, [&](std::ostream & s) { write_graph(s, g); });
                return ok;
            }
            if (*normalize_cmd) {
                auto t = normalize_glue_order(load_tree(o.tree));
                emit(o.output, out, [&](std::ostream & s) { s << format_tree(t); });
                return ok;
            }
            if (*reduce_cmd) {
                auto r = reduce_to_base(load_tree(o.tree), step_budget_from_environment());
                emit(o.output, out, [&](std::ostream & s) { write_graph(s, r.witness); });
                return ok;
            }
        }
        catch (const ValidationError & e) {
            err << "error: " << e.what() << "\n";
            for (auto & i : e.diagnostics())
                err << "  " << i.path << ": " << i.invariant << ": " << i.message << "\n";
            return input_error;
        }
        catch (const DomainError & e) {
            err << "error: " << e.what() << "\n";
            return input_error;
        }
        catch (const BudgetExceeded & e) {
            err << "error: " << e.what() << "\n";
            return budget_exceeded;
        }
        catch (const CertificationError & e) {
            err << "certification failed: " << e.what() << "\n";
            return certification_failed;
        }
        catch (const InvariantError & e) {
            err << "internal invariant violated: " << e.what() << "\n";
            return certification_failed;
        }
        return input_error;
    }
}

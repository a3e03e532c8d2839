#include "cli.hpp"

#include <chibound/graph.hpp>
#include <chibound/optree.hpp>

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chibound;
namespace fs = std::filesystem;

namespace
{
    struct Result
    {
        int code;
        std::string out, err;
    };

    struct Workspace
    {
        fs::path dir;

        Workspace()
        {
            std::string pattern = (fs::temp_directory_path() / "chibound-cli-XXXXXX").string();
            dir = mkdtemp(pattern.data());
        }

        ~Workspace() { fs::remove_all(dir); }

        auto path(const std::string & name) const -> std::string { return (dir / name).string(); }

        auto write(const std::string & name, const std::string & text) const -> std::string
        {
            std::ofstream(path(name), std::ios::binary) << text;
            return path(name);
        }

        auto read(const std::string & name) const -> std::string
        {
            std::ifstream in(path(name), std::ios::binary);
            std::stringstream s;
            s << in.rdbuf();
            return s.str();
        }
    };

    auto run(std::vector<std::string> args) -> Result
    {
        std::ostringstream out, err;
        auto code = cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }

    auto two_triangles() -> std::string
    {
        Graph left({"a", "b", "x"}, {{"a", "b"}, {"a", "x"}, {"b", "x"}});
        Graph right({"x", "c", "d"}, {{"x", "c"}, {"x", "d"}, {"c", "d"}});
        return format_tree(make_k_glue(1, make_leaf(left, "complete"), make_leaf(right, "complete"), {"x"}));
    }

    auto first_number(const std::string & line) -> int
    {
        return std::stoi(line);
    }
}

TEST_CASE("colouring two triangles glued at a vertex")
{
    Workspace ws;
    auto tree = ws.write("tt.json", two_triangles());
    auto r = run({"color", tree, "--method", "kglue", "--bound", "kglue(x,1)", "-o", ws.path("tt.col"), "--cert",
            ws.path("tt.cert.json")});
    CHECK(r.code == 0);
    CHECK(first_number(r.out) <= 4);
    CHECK(r.out.find("pass") != std::string::npos);

    auto graph = ws.path("tt.graph");
    CHECK(run({"realize", tree, "-o", graph}).code == 0);
    auto v = run({"verify", graph, ws.path("tt.col"), "--bound", "kglue(x,1)"});
    CHECK(v.code == 0);
    CHECK(v.out.find("omega 3") != std::string::npos);
    CHECK(ws.read("tt.cert.json").find("\"verdict\": \"pass\"") != std::string::npos);
}

TEST_CASE("verifying a monochromatic edge fails")
{
    Workspace ws;
    auto g = ws.write("edge.graph", "p 2 1\nv a\nv b\ne a b\n");
    auto c = ws.write("edge.col", "a 0\nb 0\n");
    auto r = run({"verify", g, c, "--bound", "x"});
    CHECK(r.code == 1);
    CHECK(r.out == "improper\n");
}

TEST_CASE("fractional chromatic number of the second lexicographic power of C5")
{
    Workspace ws;
    auto c5 = ws.write("c5.graph", format_graph(cycle_graph(5, "v")));
    CHECK(run({"gen", "lexpow", c5, "2", "-o", ws.path("f2.graph")}).code == 0);
    auto r = run({"oracle", ws.path("f2.graph"), "--chif"});
    CHECK(r.code == 0);
    CHECK(r.out == "25/4\n");
    CHECK(run({"oracle", c5, "--chif"}).out == "5/2\n");
    CHECK(run({"oracle", ws.path("f2.graph"), "--omega"}).out == "4\n");
}

TEST_CASE("oracle subcommands")
{
    Workspace ws;
    CHECK(run({"gen", "mycielski", "2", "-o", ws.path("m2.graph")}).code == 0);
    CHECK(run({"oracle", ws.path("m2.graph"), "--chi"}).out == "4\n");
    CHECK(run({"oracle", ws.path("m2.graph"), "--cutset", "1"}).out == "none\n");
    auto tt = ws.path("tt.graph");
    run({"realize", ws.write("tt.json", two_triangles()), "-o", tt});
    CHECK(run({"oracle", tt, "--cutset", "1"}).out == "cutset 1 x\n");
    CHECK(run({"oracle", tt, "--chi", "--omega"}).code == 2);
    CHECK(run({"oracle", tt}).code == 2);
}

TEST_CASE("every colouring the tool produces verifies")
{
    Workspace ws;
    struct Case
    {
        std::string kind, method, bound;
    };
    std::vector<Case> cases{{"cograph", "depth", "x"}, {"cograph", "supermult", "2^(x-1)"},
            {"poly", "poly", "polystar(1)"}, {"kglue", "kglue", "kglue(x,2)"}, {"glue", "kglue", "kglue(x+1,2)"}};
    for (auto & c : cases)
        for (int seed = 1; seed <= 4; ++seed) {
            CAPTURE(c.kind);
            CAPTURE(seed);
            auto tree = ws.path("t.json");
            REQUIRE(run({"gen", "tree", "--seed", std::to_string(seed), "--kind", c.kind, "--k", "2", "-o", tree}).code
                    == 0);
            auto col = run({"color", tree, "--method", c.method, "--bound", c.bound, "-o", ws.path("t.col")});
            REQUIRE(col.code == 0);
            run({"realize", tree, "-o", ws.path("t.graph")});
            auto v = run({"verify", ws.path("t.graph"), ws.path("t.col"), "--bound", c.bound});
            CHECK(v.code == 0);
        }
}

TEST_CASE("outputs are byte-deterministic")
{
    Workspace ws;
    for (auto name : {"a.json", "b.json"})
        run({"gen", "tree", "--seed", "9", "--kind", "glue", "-o", ws.path(name)});
    CHECK(ws.read("a.json") == ws.read("b.json"));
    CHECK_FALSE(ws.read("a.json").empty());

    for (auto stem : {"a", "b"})
        run({"color", ws.path("a.json"), "--method", "kglue", "--bound", "kglue(x+1,2)", "-o",
                ws.path(std::string(stem) + ".col"), "--cert", ws.path(std::string(stem) + ".cert")});
    CHECK(ws.read("a.col") == ws.read("b.col"));
    CHECK(ws.read("a.cert") == ws.read("b.cert"));

    for (auto name : {"n1.json", "n2.json"})
        run({"normalize", ws.path("a.json"), "-o", ws.path(name)});
    CHECK(ws.read("n1.json") == ws.read("n2.json"));
    CHECK(parse_tree(ws.read("n1.json")) != nullptr);
}

TEST_CASE("tree subcommands")
{
    Workspace ws;
    auto tree = ws.write("tt.json", two_triangles());
    CHECK(run({"validate", tree}).out == "ok\n");
    CHECK(run({"depth", ws.write("leaf.json", format_tree(make_leaf(complete_graph(3), "complete")))}).out == "0\n");

    run({"gen", "tree", "--seed", "3", "--kind", "reducible", "-o", ws.path("r.json")});
    auto r = run({"reduce", ws.path("r.json"), "-o", ws.path("w.graph")});
    CHECK(r.code == 0);
    CHECK(parse_graph(ws.read("w.graph")).order() >= 1);

    auto apart = ws.write("apart.json", format_tree(make_k_glue(1, make_leaf(complete_graph(2, "p")),
            make_leaf(complete_graph(2, "q")), {})));
    CHECK(run({"validate", apart}).out == "ok\n");

    auto custom = run({"gen", "tree", "--seed", "4", "--mix", "1,1,0,0", "--leaves", "complete,path", "--max-depth", "2"});
    CHECK(custom.code == 0);
    CHECK(parse_tree(custom.out) != nullptr);
}

TEST_CASE("input errors exit with 2")
{
    Workspace ws;
    auto tree = ws.write("tt.json", two_triangles());
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"realize", ws.path("missing.json")}).code == 2);
    CHECK(run({"realize", ws.write("junk.json", "{ not json")}).code == 2);
    CHECK(run({"color", tree, "--method", "magic", "--bound", "x"}).code == 2);
    CHECK(run({"color", tree, "--method", "kglue", "--bound", "x^"}).code == 2);
    CHECK(run({"gen", "mycielski", "9"}).code == 2);
    CHECK(run({"gen", "tree", "--seed", "1", "--mix", "1,2"}).code == 2);

    auto invalid = ws.write("invalid.json",
            R"({"clique_glue": {"shared": ["a"], "left": {"leaf": {"class": "base", "graph": {"vertices": ["a", "b"], "edges": []}}}, "right": {"leaf": {"class": "base", "graph": {"vertices": ["c"], "edges": []}}}}})");
    auto v = run({"validate", invalid});
    CHECK(v.code == 2);
    CHECK(v.out.find("$") != std::string::npos);
}

TEST_CASE("certification failures exit with 1")
{
    Workspace ws;
    auto k4 = ws.write("k4.json", format_tree(make_leaf(complete_graph(4), "complete")));
    auto r = run({"color", k4, "--method", "depth", "--bound", "const 2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("certification failed") != std::string::npos);

    auto g = ws.write("k3.graph", format_graph(complete_graph(3)));
    auto c = ws.write("k3.col", "0 0\n1 1\n2 2\n");
    CHECK(run({"verify", g, c, "--bound", "const 2"}).code == 1);
}

TEST_CASE("an exhausted step budget exits with 3")
{
    Workspace ws;
    run({"gen", "mycielski", "3", "-o", ws.path("m3.graph")});
    setenv("CHIBOUND_STEP_BUDGET", "10", 1);
    auto r = run({"oracle", ws.path("m3.graph"), "--chi"});
    unsetenv("CHIBOUND_STEP_BUDGET");
    CHECK(r.code == 3);
    CHECK(run({"oracle", ws.path("m3.graph"), "--chi"}).out == "5\n");
}

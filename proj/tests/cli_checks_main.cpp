// End-to-end checks of the CLI contract: exit codes (0 found/success,
// 1 legitimate negative, 2 usage/validation), seeded reproducibility, and the
// JSON surfaces. Takes the binary path as argv[1].

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rainbow/extremal.hpp"
#include "rainbow/generate.hpp"
#include "rainbow/json_io.hpp"
#include "rainbow/reductions.hpp"

using namespace rainbow;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;
int g_failures = 0;

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = g_cli + " " + args;
    if (!stdout_file.empty()) cmd += " >" + (g_dir / stdout_file).string();
    cmd += " 2>" + (g_dir / "stderr.log").string();
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void check(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "ok: " << what << "\n";
    } else {
        std::cout << "FAIL: " << what << "\n";
        ++g_failures;
    }
}

void write_json(const std::string& name, const json& j) {
    std::ofstream out(g_dir / name);
    out << j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_checks <path-to-cli>\n";
        return 64;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "rainbow-cli-checks";
    fs::create_directories(g_dir);

    // seeded generation is byte-reproducible
    check(run("gen random-dirac --n 6 --bound 2 --seed 7 -o " + (g_dir / "g1.json").string()) == 0,
          "gen random-dirac exits 0");
    check(run("gen random-dirac --n 6 --bound 2 --seed 7 -o " + (g_dir / "g2.json").string()) == 0,
          "gen random-dirac exits 0 (second run)");
    check(read_file_bytes((g_dir / "g1.json").string()) ==
              read_file_bytes((g_dir / "g2.json").string()),
          "same seed gives identical files");
    check(run("gen random-dirac --n 6 --bound 2 --seed 8 -o " + (g_dir / "g3.json").string()) == 0,
          "gen with another seed");
    check(read_file_bytes((g_dir / "g1.json").string()) !=
              read_file_bytes((g_dir / "g3.json").string()),
          "different seed changes the instance");

    // knn generation
    check(run("gen knn --n 4 -o " + (g_dir / "k44.json").string()) == 0, "gen knn exits 0");
    {
        auto g = graph_from_json(load_json_file((g_dir / "k44.json").string()));
        check(g.n_per_side() == 4 && g.edges().size() == 16 && coloring_bound(g) == 1,
              "knn file is K_{4,4} with distinct colors");
    }

    // classify: expander on K_{8,8}, exit 2 on non-Dirac input
    check(run("gen knn --n 8 -o " + (g_dir / "k88.json").string()) == 0, "gen knn 8");
    check(run("classify " + (g_dir / "k88.json").string(), "cls.json") == 0, "classify exits 0");
    {
        auto cls = load_json_file((g_dir / "cls.json").string());
        check(cls.at("verdict") == "expander" && cls.at("certified").get<bool>(),
              "K_{8,8} classified as certified expander");
    }
    write_json("pm_only.json", graph_to_json(make_matching_only(4)));
    check(run("classify " + (g_dir / "pm_only.json").string()) == 2,
          "classify on non-Dirac input exits 2");

    // solve negative: counterexample with restricted strategy stays undecided
    check(run("gen counterexample --t 1 -o " + (g_dir / "cx.json").string()) == 0,
          "gen counterexample");
    check(run("solve " + (g_dir / "cx.json").string() + " --strategy restart", "sr.json") == 1,
          "restart-only solve exits 1");
    check(load_json_file((g_dir / "sr.json").string()).at("outcome") == "exhausted",
          "restart-only outcome is exhausted");
    check(run("solve " + (g_dir / "cx.json").string(), "sa.json") == 1, "auto solve exits 1");
    check(load_json_file((g_dir / "sa.json").string()).at("outcome") == "proved-none",
          "auto solve proves nonexistence");

    // solve positive with explicit conflicts on a high-min-degree instance
    {
        auto g = random_min_degree_bipartite(8, 5, 2, 99);  // delta >= (1/2 + 0.1) * 8
        write_json("dense.json", graph_to_json(g));
        // a sparse conflict system: forbid a few disjoint pairs
        ConflictSystem f = ConflictSystem::from_pairs(
            {{{0, g.neighbors_of_a(0)[0]}, {1, g.neighbors_of_a(1)[0]}}});
        write_json("conf.json", conflicts_to_json(f));
    }
    check(run("solve " + (g_dir / "dense.json").string() + " --conflicts " +
                  (g_dir / "conf.json").string() + " -o " + (g_dir / "m.json").string(),
              "sc.json") == 0,
          "conflict-mode solve exits 0");
    check(run("verify " + (g_dir / "dense.json").string() + " " + (g_dir / "m.json").string() +
              " --conflicts " + (g_dir / "conf.json").string()) == 0,
          "verify accepts the conflict-free matching");
    check(run("solve " + (g_dir / "dense.json").string() + " --conflicts " +
              (g_dir / "conf.json").string() + " --jobs 4") == 0,
          "parallel restart workers find a matching");

    // verify rejects an imperfect matching
    write_json("partial.json", json::array({json::array({0, 0})}));
    check(run("verify " + (g_dir / "k44.json").string() + " " + (g_dir / "partial.json").string()) ==
              1,
          "verify rejects a partial matching with exit 1");

    // sample: degenerate report on a single-matching graph
    write_json("only.json", graph_to_json(make_matching_only(3)));
    check(run("sample " + (g_dir / "only.json").string() + " --samples 200 --burn-in 20",
              "samp.json") == 0,
          "sample exits 0");
    check(load_json_file((g_dir / "samp.json").string()).at("distinct") == 1,
          "single-matching graph gives a degenerate report");

    // sample with 6-cycles only: the report flags the unreachable sign class
    write_json("k33.json", graph_to_json(make_knn(3)));
    check(run("sample " + (g_dir / "k33.json").string() +
                  " --cycles 6 --samples 2000 --seed 11",
              "samp6.json") == 0,
          "6-only sample exits 0");
    {
        auto rep = load_json_file((g_dir / "samp6.json").string());
        check(rep.at("distinct") == 3 && rep.at("sign_class_unreachable").get<bool>(),
              "6-only chain visits 3 states and flags the missing sign class");
    }

    // solve --trace on a planted extremal instance
    {
        auto inst = make_superextremal_instance(16, 2, 2, 31);
        write_json("planted.json", graph_to_json(inst.graph));
    }
    check(run("solve " + (g_dir / "planted.json").string() + " --trace --seed 5", "st.json") == 0,
          "planted extremal instance solves with exit 0");
    {
        auto st = load_json_file((g_dir / "st.json").string());
        check(st.at("outcome") == "found" && st.contains("matching"),
              "trace run reports a matching");
    }

    // bench produces a timing report
    check(run("bench " + (g_dir / "k44.json").string() + " --repeat 3 --chain-steps 5000",
              "bench.json") == 0,
          "bench exits 0");
    {
        auto b = load_json_file((g_dir / "bench.json").string());
        check(b.at("solve").at("found") == 3 &&
                  b.at("chain").at("steps_per_second").get<double>() > 0,
              "bench reports solve outcomes and chain throughput");
    }

    // --params file plumbing and --exact-threshold
    write_json("p.json", json{{"restart_budget", 5}, {"mu", 0.05}});
    check(run("solve " + (g_dir / "cx.json").string() + " --params " + (g_dir / "p.json").string() +
              " --strategy repair") == 1,
          "params file accepted; repair-only stays undecided on the counterexample");
    check(run("solve " + (g_dir / "cx.json").string() + " --exact-threshold 4", "sx.json") == 1,
          "exact threshold below n disables the exhaustive decision");
    check(load_json_file((g_dir / "sx.json").string()).at("outcome") == "exhausted",
          "outcome degrades to exhausted without the exact stage");
    write_json("bad_params.json", json{{"eta", 1.5}});
    check(run("classify " + (g_dir / "k88.json").string() + " --params " +
              (g_dir / "bad_params.json").string()) == 2,
          "invalid parameter file exits 2");

    // usage/validation errors exit 2
    check(run("factor " + (g_dir / "k44.json").string() + " --delta 3") == 2,
          "factor with odd delta exits 2");
    check(run("gen no-such-kind --n 4") == 2, "unknown gen kind exits 2");
    check(run("solve " + (g_dir / "does-not-exist.json").string()) == 2,
          "missing input file exits 2");
    write_json("broken.json", json{{"n", 2}});
    check(run("classify " + (g_dir / "broken.json").string()) == 2,
          "malformed graph JSON exits 2");
    check(run("nonsense-subcommand") == 2, "unknown subcommand exits 2");

    if (g_failures == 0) {
        std::cout << "all CLI checks passed\n";
        return 0;
    }
    std::cout << g_failures << " CLI checks failed\n";
    return 1;
}

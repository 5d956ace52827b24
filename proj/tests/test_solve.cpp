#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "rainbow/generate.hpp"
#include "rainbow/json_io.hpp"
#include "rainbow/oracle.hpp"
#include "rainbow/solve.hpp"

using namespace rainbow;

TEST_CASE("graph JSON round trip preserves the edge set") {
    ParamSet params;
    auto g = random_dirac_instance(6, 2, params, 33);
    auto back = graph_from_json(graph_to_json(g));
    CHECK(back.n_per_side() == g.n_per_side());
    CHECK(back.edges() == g.edges());
}

TEST_CASE("matching JSON is sorted by a and round trips") {
    auto g = make_knn(4);
    auto m = Matching::from_pairs(g, {{3, 0}, {0, 3}, {1, 2}, {2, 1}});
    auto j = matching_to_json(m);
    REQUIRE(j.size() == 4);
    CHECK(j[0][0].get<int>() == 0);
    CHECK(j[3][0].get<int>() == 3);
    CHECK(matching_from_json(g, j) == m);
}

TEST_CASE("conflict system and params JSON round trips") {
    auto f = ConflictSystem::from_pairs({{{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}});
    auto f2 = conflicts_from_json(conflicts_to_json(f));
    CHECK(f2.pairs() == f.pairs());
    CHECK(f2.bound() == f.bound());

    ParamSet p;
    p.mu = 0.07;
    p.seed = 99;
    auto p2 = params_from_json(params_to_json(p));
    CHECK(p2.mu == p.mu);
    CHECK(p2.seed == p.seed);
    // partial override keeps defaults elsewhere
    auto p3 = params_from_json(json{{"nu", 0.4}});
    CHECK(p3.nu == 0.4);
    CHECK(p3.tau == ParamSet{}.tau);
}

TEST_CASE("malformed JSON is rejected with InvalidInput") {
    CHECK_THROWS_AS(graph_from_json(json{{"edges", json::array()}}), Error);
    CHECK_THROWS_AS(graph_from_json(json{{"n", 2}, {"edges", {{0, 1}}}}), Error);
    CHECK_THROWS_AS(conflicts_from_json(json::array()), Error);
}

TEST_CASE("solve_rainbow routes expanders through the direct search") {
    ParamSet params;
    auto g = make_knn(6);
    auto out = solve_rainbow(g, std::nullopt, params);
    CHECK(out.route == "expander");
    REQUIRE(out.report.outcome == SearchReport::Outcome::Found);
    CHECK(is_rainbow(g, *out.report.matching));
}

TEST_CASE("solve_rainbow routes the planted extremal instance through the pipeline") {
    ParamSet params;
    params.seed = 4;
    auto inst = make_superextremal_instance(16, 2, 2, 88);
    auto out = solve_rainbow(inst.graph, std::nullopt, params);
    REQUIRE(out.report.outcome == SearchReport::Outcome::Found);
    CHECK(is_rainbow(inst.graph, *out.report.matching));
    INFO("route " << out.route);
    CHECK((out.route == "extremal" || out.route == "extremal-fallback" ||
           out.route == "expander"));
}

TEST_CASE("solve_rainbow proves the counterexample negative end to end") {
    ParamSet params;
    auto cx = counterexample(1);
    auto out = solve_rainbow(cx.graph, std::nullopt, params);
    CHECK(out.report.outcome == SearchReport::Outcome::ProvedNone);
    REQUIRE(out.classification.has_value());
    CHECK(out.classification->verdict == Classification::Verdict::Extremal);
}

TEST_CASE("solve_rainbow with an explicit conflict system never uses the pipeline") {
    ParamSet params;
    auto inst = make_superextremal_instance(16, 2, 2, 88);
    auto f = conflicts_from_coloring(inst.graph);
    auto out = solve_rainbow(inst.graph, f, params);
    CHECK_FALSE(out.pipeline.has_value());
    REQUIRE(out.report.outcome == SearchReport::Outcome::Found);
    CHECK(is_conflict_free(*out.report.matching, f));
}

TEST_CASE("solve_rainbow on a non-Dirac graph skips classification") {
    ParamSet params;
    std::vector<Edge> edges;
    int c = 0;  // a sparse-but-matchable graph: identity plus one extra edge
    for (int v = 0; v < 4; ++v) edges.push_back({v, v, c++});
    edges.push_back({0, 1, c++});
    auto g = build_graph(4, edges);
    auto out = solve_rainbow(g, std::nullopt, params);
    CHECK_FALSE(out.dirac);
    CHECK(out.route == "direct");
    CHECK(out.report.outcome == SearchReport::Outcome::Found);
}

TEST_CASE("solve_rainbow on two dense halves: refinement realigns the partition, ell = 0") {
    // two complete halves of size 3 with a 2-bounded coloring; exactly Dirac
    std::mt19937_64 rng = make_rng(60);
    std::vector<Edge> edges;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) edges.push_back({a, b, 0});
    for (int a = 3; a < 6; ++a)
        for (int b = 3; b < 6; ++b) edges.push_back({a, b, 0});
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].color = static_cast<int>(i / 2);
    auto g = build_graph(6, edges);
    REQUIRE(is_dirac(g));

    ParamSet params;
    params.seed = 11;
    auto out = solve_rainbow(g, std::nullopt, params);
    auto truth = oracle::exists_conflict_free_pm(g, conflicts_from_coloring(g));
    if (truth.kind == oracle::ExistenceResult::Kind::Yes) {
        REQUIRE(out.report.outcome == SearchReport::Outcome::Found);
        CHECK(is_rainbow(g, *out.report.matching));
    } else {
        CHECK(out.report.outcome == SearchReport::Outcome::ProvedNone);
    }
    REQUIRE(out.classification.has_value());
    CHECK(out.classification->verdict == Classification::Verdict::Extremal);
    // the classifier's witness partition need not align with the halves; the
    // refinement stage moves zero-cross-degree vertices back where they belong
    auto refined = refine_to_superextremal(g, *out.classification->partition, params);
    CHECK(refined.ell() == 0);
    std::set<int> a1(refined.a1.begin(), refined.a1.end());
    CHECK((a1 == std::set<int>{0, 1, 2} || a1 == std::set<int>{3, 4, 5}));
}

TEST_CASE("solve_rainbow is deterministic for a fixed seed with one worker") {
    ParamSet params;
    params.seed = 77;
    auto g = random_dirac_instance(9, 2, params, 123);
    auto a = solve_rainbow(g, std::nullopt, params);
    auto b = solve_rainbow(g, std::nullopt, params);
    REQUIRE(a.report.outcome == b.report.outcome);
    CHECK(a.route == b.route);
    if (a.report.matching) CHECK(*a.report.matching == *b.report.matching);
}

TEST_CASE("large counterexamples classify extremal through the randomized mode") {
    ParamSet params;  // n = 48 > expander_exact_max_n
    auto cx = counterexample(3);
    REQUIRE(cx.graph.n_per_side() == 48);
    auto c = classify(cx.graph, params);
    REQUIRE(c.verdict == Classification::Verdict::Extremal);
    CHECK(is_extremal(cx.graph, *c.partition, c.epsilon).ok());
}

TEST_CASE("solve_rainbow vs oracle over a mixed bag") {
    ParamSet params;
    std::mt19937_64 rng = make_rng(8080);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + static_cast<int>(rng() % 4);
        auto g = random_dirac_instance(n, 2, params, rng());
        params.seed = rng();
        auto out = solve_rainbow(g, std::nullopt, params);
        auto truth = oracle::exists_conflict_free_pm(g, conflicts_from_coloring(g));
        REQUIRE(truth.kind != oracle::ExistenceResult::Kind::Unknown);
        bool exists = truth.kind == oracle::ExistenceResult::Kind::Yes;
        if (exists) {
            CHECK(out.report.outcome == SearchReport::Outcome::Found);
        } else {
            CHECK(out.report.outcome == SearchReport::Outcome::ProvedNone);
        }
    }
}

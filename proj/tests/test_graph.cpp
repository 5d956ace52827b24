#include <catch2/catch_amalgamated.hpp>

#include "rainbow/generate.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/reductions.hpp"

using namespace rainbow;

TEST_CASE("build_graph constructs K_{2,2} with all degrees 2") {
    auto g = build_graph(2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 3}, {1, 1, 4}});
    REQUIRE(g.n_per_side() == 2);
    REQUIRE(g.edges().size() == 4);
    for (int v = 0; v < 2; ++v) {
        CHECK(g.degree_a(v) == 2);
        CHECK(g.degree_b(v) == 2);
    }
}

TEST_CASE("build_graph rejects a duplicate (a,b) pair") {
    std::vector<Edge> edges = {{0, 0, 1}, {0, 0, 2}};
    try {
        build_graph(2, edges);
        FAIL("expected DuplicateEdge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DuplicateEdge);
    }
}

TEST_CASE("build_graph rejects out-of-range indices and negative colors") {
    CHECK_THROWS_AS(build_graph(2, {{0, 2, 1}}), Error);
    CHECK_THROWS_AS(build_graph(2, {{-1, 0, 1}}), Error);
    CHECK_THROWS_AS(build_graph(2, {{0, 0, -1}}), Error);
}

TEST_CASE("t=1 counterexample graph has min degree 4 via build_graph") {
    auto cx = counterexample(1);
    // rebuild through build_graph from the raw edge list
    auto g = build_graph(cx.graph.n_per_side(), cx.graph.edges());
    REQUIRE(g.n_per_side() == 8);
    CHECK(g.min_degree() == 4);
}

TEST_CASE("is_dirac on complete, matching-only, and counterexample graphs") {
    CHECK(is_dirac(make_knn(3)));
    CHECK(is_dirac(make_knn(6)));
    CHECK_FALSE(is_dirac(make_matching_only(3)));  // degree 1 < 2
    CHECK(is_dirac(counterexample(1).graph));
}

TEST_CASE("is_dirac is monotone under edge addition") {
    std::mt19937_64 rng = make_rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 3 + static_cast<int>(rng() % 5);
        std::vector<Edge> edges;
        int c = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (rng() % 2) edges.push_back({a, b, c++});
        auto g = build_graph(n, edges);
        if (!is_dirac(g)) continue;
        // add any missing edge: still Dirac
        std::vector<Edge> more = edges;
        bool added = false;
        for (int a = 0; a < n && !added; ++a)
            for (int b = 0; b < n && !added; ++b)
                if (!g.has_edge(a, b)) {
                    more.push_back({a, b, c++});
                    added = true;
                }
        CHECK(is_dirac(build_graph(n, more)));
    }
}

TEST_CASE("coloring_bound") {
    CHECK(coloring_bound(make_knn(3)) == 1);  // all distinct
    auto mono = build_graph(2, {{0, 0, 7}, {0, 1, 7}, {1, 0, 7}, {1, 1, 7}});
    CHECK(coloring_bound(mono) == 4);
    CHECK(coloring_bound(counterexample(1).graph) == 4);  // (t+1)^2 with t=1
    auto empty_side = build_graph(2, {});
    CHECK(coloring_bound(empty_side) == 0);
}

TEST_CASE("conflicts_from_coloring pair structure") {
    SECTION("two edges sharing one color") {
        auto g = build_graph(2, {{0, 0, 5}, {1, 1, 5}, {0, 1, 9}});
        auto f = conflicts_from_coloring(g);
        REQUIRE(f.pairs().size() == 1);
        CHECK(f.bound() == 1);
        CHECK(f.conflicts({0, 0}, {1, 1}));
    }
    SECTION("all-distinct colors give an empty system") {
        auto f = conflicts_from_coloring(make_knn(3));
        CHECK(f.pairs().empty());
        CHECK(f.bound() == 0);
    }
    SECTION("monochromatic K_{2,2}: C(4,2) = 6 pairs, bound 3") {
        auto mono = build_graph(2, {{0, 0, 7}, {0, 1, 7}, {1, 0, 7}, {1, 1, 7}});
        auto f = conflicts_from_coloring(mono);
        CHECK(f.pairs().size() == 6);
        CHECK(f.bound() == 3);
    }
}

TEST_CASE("coloring bound vs conflict bound: k-bounded coloring <=> (k-1)-bounded system") {
    std::mt19937_64 rng = make_rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        int colors = 1 + static_cast<int>(rng() % 6);
        std::vector<Edge> edges;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (rng() % 3) edges.push_back({a, b, static_cast<int>(rng() % colors)});
        auto g = build_graph(n, edges);
        int k = coloring_bound(g);
        auto f = conflicts_from_coloring(g);
        if (k >= 2) {
            CHECK(f.bound() == k - 1);
        } else {
            CHECK(f.bound() == 0);
        }
    }
}

TEST_CASE("random_dirac_instance: Dirac, bounded coloring, reproducible") {
    ParamSet params;
    SECTION("n=4, bound 1: all colors distinct") {
        auto g = random_dirac_instance(4, 1, params, 11);
        CHECK(is_dirac(g));
        CHECK(coloring_bound(g) == 1);
    }
    SECTION("n=6, bound 2") {
        auto g = random_dirac_instance(6, 2, params, 12);
        CHECK(is_dirac(g));
        CHECK(coloring_bound(g) <= 2);
    }
    SECTION("n=2, bound 1: min degree >= 1") {
        auto g = random_dirac_instance(2, 1, params, 13);
        CHECK(g.min_degree() >= 1);
    }
    SECTION("identical seeds give identical graphs") {
        for (std::uint64_t seed : {1ULL, 99ULL, 12345ULL}) {
            auto g1 = random_dirac_instance(7, 2, params, seed);
            auto g2 = random_dirac_instance(7, 2, params, seed);
            CHECK(g1.edges() == g2.edges());
        }
        auto g1 = random_dirac_instance(7, 2, params, 1);
        auto g2 = random_dirac_instance(7, 2, params, 2);
        CHECK(g1.edges() != g2.edges());
    }
}

TEST_CASE("generation gives up after retry_cap attempts") {
    // demanding a complete graph at edge probability 0.05 cannot succeed
    try {
        random_min_degree_bipartite(8, 8, 1, 5, 3, 0.05);
        FAIL("expected GenerationFailed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GenerationFailed);
    }
}

TEST_CASE("ConflictSystem validation") {
    CHECK_THROWS_AS(ConflictSystem::from_pairs({{{0, 0}, {0, 0}}}), Error);
    CHECK_THROWS_AS(ConflictSystem::from_pairs({{{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}}), Error);
}

TEST_CASE("ParamSet validation") {
    ParamSet p;
    CHECK_NOTHROW(p.validate());
    p.eta = 1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = ParamSet{};
    p.mu = 0;
    CHECK_THROWS_AS(p.validate(), Error);
}

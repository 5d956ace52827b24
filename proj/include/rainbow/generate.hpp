#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/params.hpp"

namespace rainbow {

/// K_{n,n} with all-distinct colors.
inline ColoredBipartiteGraph make_knn(int n) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * n);
    int c = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) edges.push_back({a, b, c++});
    return build_graph(n, edges);
}

/// A graph that is exactly one perfect matching (the identity).
inline ColoredBipartiteGraph make_matching_only(int n) {
    std::vector<Edge> edges;
    for (int v = 0; v < n; ++v) edges.push_back({v, v, v});
    return build_graph(n, edges);
}

namespace detail {

/// Shuffled round-robin color assignment: classes of size <= color_bound.
inline void assign_colors(std::vector<Edge>& edges, int color_bound, std::mt19937_64& rng,
                          int first_color = 0) {
    std::vector<int> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < order.size(); ++i)
        edges[order[i]].color = first_color + static_cast<int>(i) / color_bound;
}

}  // namespace detail

/// Random balanced bipartite graph with minimum degree >= min_degree on both
/// sides, by rejection sampling; deterministic per seed.
inline ColoredBipartiteGraph random_min_degree_bipartite(int n, int min_degree, int color_bound,
                                                         std::uint64_t seed, int retry_cap = 1000,
                                                         double edge_prob = 0.7) {
    if (min_degree > n) throw Error(ErrorKind::InvalidInput, "min_degree > n");
    if (color_bound < 1) throw Error(ErrorKind::InvalidInput, "color_bound must be >= 1");
    std::mt19937_64 rng = make_rng(seed);
    std::bernoulli_distribution coin(edge_prob);
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        std::vector<Edge> edges;
        std::vector<int> deg_a(n, 0), deg_b(n, 0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (coin(rng)) {
                    edges.push_back({a, b, 0});
                    ++deg_a[a];
                    ++deg_b[b];
                }
        int dmin = n;
        for (int v = 0; v < n; ++v) dmin = std::min({dmin, deg_a[v], deg_b[v]});
        if (dmin < min_degree) continue;
        detail::assign_colors(edges, color_bound, rng);
        return build_graph(n, edges);
    }
    throw Error(ErrorKind::GenerationFailed,
                "no instance with min degree " + std::to_string(min_degree) + " after " +
                    std::to_string(retry_cap) + " attempts");
}

/// Random Dirac instance with class sizes <= color_bound; reproducible per seed.
inline ColoredBipartiteGraph random_dirac_instance(int n, int color_bound, const ParamSet& params,
                                                   std::uint64_t seed) {
    return random_min_degree_bipartite(n, (n + 1) / 2, color_bound, seed, params.retry_cap);
}

/// Two dense halves joined by a matching on each cross pair: |A1| = |B2| = m+1,
/// |A2| = |B1| = m, complete inside G[A1,B1] and G[A2,B2], a perfect matching
/// across G[A2,B1], and one more matching across G[A1,B2] so every degree
/// reaches ceil(n/2). A1 fails robust expansion for nu > 1/n: its robust
/// neighborhood stays inside B1.
struct NearSplitFixture {
    ColoredBipartiteGraph graph;
    std::vector<int> a1, a2, b1, b2;
};

inline NearSplitFixture near_split_fixture(int m) {
    const int n = 2 * m + 1;
    NearSplitFixture fx;
    // side A: [0, m+1) = A1, [m+1, n) = A2; side B: [0, m) = B1, [m, n) = B2
    for (int v = 0; v < m + 1; ++v) fx.a1.push_back(v);
    for (int v = m + 1; v < n; ++v) fx.a2.push_back(v);
    for (int v = 0; v < m; ++v) fx.b1.push_back(v);
    for (int v = m; v < n; ++v) fx.b2.push_back(v);

    std::vector<Edge> edges;
    int color = 0;
    for (int a : fx.a1)
        for (int b : fx.b1) edges.push_back({a, b, color++});
    for (int a : fx.a2)
        for (int b : fx.b2) edges.push_back({a, b, color++});
    for (int i = 0; i < m; ++i) edges.push_back({fx.a2[i], fx.b1[i], color++});
    for (int i = 0; i < m + 1; ++i) edges.push_back({fx.a1[i], fx.b2[i], color++});
    fx.graph = build_graph(n, edges);
    return fx;
}

}  // namespace rainbow

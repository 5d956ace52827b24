#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/matching.hpp"
#include "rainbow/util.hpp"

namespace rainbow {

struct SimpleEdge {
    int u = -1;
    int v = -1;  // u < v canonical
    Color color = 0;

    friend bool operator==(const SimpleEdge&, const SimpleEdge&) = default;
    friend auto operator<=>(const SimpleEdge&, const SimpleEdge&) = default;
};

/// Undirected simple graph with colored edges; input surface for the
/// factor/embedding reductions (everything else in the library is bipartite).
class SimpleGraph {
  public:
    SimpleGraph() = default;

    SimpleGraph(int n_vertices, std::vector<SimpleEdge> edges) : n_(n_vertices) {
        if (n_vertices <= 0) throw Error(ErrorKind::InvalidInput, "n_vertices must be positive");
        adj_.resize(n_);
        for (SimpleEdge& e : edges) {
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.u < 0 || e.v >= n_)
                throw Error(ErrorKind::IndexOutOfRange, "vertex out of range");
            if (e.u == e.v) throw Error(ErrorKind::InvalidInput, "self-loop");
        }
        std::sort(edges.begin(), edges.end());
        for (const SimpleEdge& e : edges) {
            if (!color_by_key_.emplace(edge_key(e.u, e.v), e.color).second)
                throw Error(ErrorKind::DuplicateEdge,
                            "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
            adj_[e.u].push_back(e.v);
            adj_[e.v].push_back(e.u);
        }
        for (auto& a : adj_) std::sort(a.begin(), a.end());
        edges_ = std::move(edges);
    }

    int n_vertices() const { return n_; }
    const std::vector<SimpleEdge>& edges() const { return edges_; }
    bool has_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        return color_by_key_.count(edge_key(u, v)) > 0;
    }
    Color color_of(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = color_by_key_.find(edge_key(u, v));
        if (it == color_by_key_.end()) throw Error(ErrorKind::IndexOutOfRange, "no such edge");
        return it->second;
    }
    const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
    int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
    int min_degree() const {
        int d = n_;
        for (int v = 0; v < n_; ++v) d = std::min(d, degree(v));
        return d;
    }

  private:
    int n_ = 0;
    std::vector<SimpleEdge> edges_;
    std::vector<std::vector<int>> adj_;
    std::unordered_map<std::uint64_t, Color> color_by_key_;
};

inline bool is_dirac(const SimpleGraph& g) { return g.min_degree() >= (g.n_vertices() + 1) / 2; }

/// Proper edge coloring: no two edges sharing a vertex carry the same color.
inline bool is_proper_coloring(const SimpleGraph& g) {
    std::vector<std::set<Color>> at(g.n_vertices());
    for (const SimpleEdge& e : g.edges()) {
        if (!at[e.u].insert(e.color).second) return false;
        if (!at[e.v].insert(e.color).second) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Counterexample family: a Dirac bipartite graph whose ((t+1)/4t * n)-bounded
// coloring admits no rainbow perfect matching.
// ---------------------------------------------------------------------------

struct CounterexampleMeta {
    int t = 0;
    int m = 0;           // 2t
    int block = 0;       // t+1
    std::vector<int> a1, a2, b1, b2;                       // flattened parts
    std::vector<std::vector<int>> a2_blocks, b1_blocks;    // the cross-pair blocks
    int a1_size = 0;            // (m-1)(t+1)
    int b1_size = 0;            // (m+1)(t+1)
    int cross_needed = 0;       // |B1| - |A1| = m+2
    int cross_rainbow_max = 0;  // one color per A2^i x B1^i pair: m+1
    int color_bound = 0;        // (t+1)^2
};

struct Counterexample {
    ColoredBipartiteGraph graph;
    CounterexampleMeta meta;
};

/// Side size n = 4t(t+1). A has m-1 blocks of A1 then m+1 blocks of A2, B has
/// m+1 blocks of B1 then m-1 blocks of B2, all of size t+1. Complete bipartite
/// G[A1,B1] and G[A2,B2], plus complete G[A2^i,B1^i] for each i; one color per
/// complete block pair. A perfect matching must use |B1|-|A1| = m+2 edges of
/// G[A2,B1] but only m+1 colors live there.
inline Counterexample counterexample(int t) {
    if (t < 1) throw Error(ErrorKind::InvalidInput, "t must be >= 1");
    const int m = 2 * t;
    const int block = t + 1;
    const int n = 4 * t * (t + 1);

    Counterexample cx;
    CounterexampleMeta& meta = cx.meta;
    meta.t = t;
    meta.m = m;
    meta.block = block;
    meta.a1_size = (m - 1) * block;
    meta.b1_size = (m + 1) * block;
    meta.cross_needed = m + 2;
    meta.cross_rainbow_max = m + 1;
    meta.color_bound = block * block;

    for (int v = 0; v < meta.a1_size; ++v) meta.a1.push_back(v);
    for (int v = meta.a1_size; v < n; ++v) meta.a2.push_back(v);
    for (int v = 0; v < meta.b1_size; ++v) meta.b1.push_back(v);
    for (int v = meta.b1_size; v < n; ++v) meta.b2.push_back(v);
    for (int i = 0; i < m + 1; ++i) {
        std::vector<int> ab, bb;
        for (int k = 0; k < block; ++k) {
            ab.push_back(meta.a1_size + i * block + k);
            bb.push_back(i * block + k);
        }
        meta.a2_blocks.push_back(ab);
        meta.b1_blocks.push_back(bb);
    }

    std::vector<Edge> edges;
    int color = 0;
    auto complete_blocks = [&](int a_first, int a_blocks, int b_first, int b_blocks) {
        for (int i = 0; i < a_blocks; ++i)
            for (int j = 0; j < b_blocks; ++j) {
                for (int p = 0; p < block; ++p)
                    for (int q = 0; q < block; ++q)
                        edges.push_back({a_first + i * block + p, b_first + j * block + q, color});
                ++color;
            }
    };
    complete_blocks(0, m - 1, 0, m + 1);                       // G[A1,B1]
    complete_blocks(meta.a1_size, m + 1, meta.b1_size, m - 1); // G[A2,B2]
    for (int i = 0; i < m + 1; ++i) {                           // G[A2^i,B1^i]
        for (int p = 0; p < block; ++p)
            for (int q = 0; q < block; ++q)
                edges.push_back({meta.a2_blocks[i][p], meta.b1_blocks[i][q], color});
        ++color;
    }
    cx.graph = build_graph(n, edges);
    return cx;
}

// ---------------------------------------------------------------------------
// Delta-factor blow-up
// ---------------------------------------------------------------------------

/// Each origin vertex v spawns delta copies u_{v,i}; copies with i <= delta/2
/// form side A, the rest side B.
struct BlowupMap {
    int n = 0;
    int delta = 0;

    int copies_per_side() const { return delta / 2; }
    int side_size() const { return n * copies_per_side(); }
    int a_index(int v, int i) const { return v * copies_per_side() + (i - 1); }
    int b_index(int v, int i) const { return v * copies_per_side() + (i - copies_per_side() - 1); }
    std::pair<int, int> origin_a(int idx) const {
        return {idx / copies_per_side(), idx % copies_per_side() + 1};
    }
    std::pair<int, int> origin_b(int idx) const {
        return {idx / copies_per_side(), idx % copies_per_side() + copies_per_side() + 1};
    }
};

struct Blowup {
    ColoredBipartiteGraph q;
    BlowupMap map;
    bool host_dirac = true;  // warning only
};

/// u_{v,i} u_{w,j} is an edge of Q iff vw is an edge of G; colors are copied,
/// so a k-bounded coloring becomes 2*(delta/2)^2*k-bounded.
inline Blowup delta_factor_blowup(const SimpleGraph& g, int delta) {
    if (delta <= 0 || delta % 2 != 0) throw Error(ErrorKind::OddDelta, std::to_string(delta));
    if (delta > g.n_vertices())
        throw Error(ErrorKind::InvalidInput, "delta exceeds vertex count");
    Blowup out;
    out.map.n = g.n_vertices();
    out.map.delta = delta;
    out.host_dirac = is_dirac(g);
    const int half = delta / 2;
    std::vector<Edge> edges;
    for (const SimpleEdge& e : g.edges())
        for (int v : {e.u, e.v}) {
            int w = v == e.u ? e.v : e.u;
            for (int i = 1; i <= half; ++i)
                for (int j = half + 1; j <= delta; ++j)
                    edges.push_back({out.map.a_index(v, i), out.map.b_index(w, j), e.color});
        }
    out.q = build_graph(out.map.side_size(), edges);
    return out;
}

struct FactorResult {
    SimpleGraph h;
    bool input_rainbow = true;  // NotRainbowInput flag when false
    bool simple = true;
    std::vector<std::pair<int, int>> duplicate_edges;
};

/// Project a perfect matching of Q back to the origin graph. For a rainbow
/// matching the result is a spanning delta-regular simple rainbow subgraph;
/// otherwise extraction still runs with the flags set.
inline FactorResult extract_factor(const SimpleGraph& g, const ColoredBipartiteGraph& q,
                                   const BlowupMap& map, const Matching& m) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "matching must be perfect");
    if (m.n() != map.side_size())
        throw Error(ErrorKind::InvalidInput, "matching does not fit the blow-up");
    FactorResult out;
    out.input_rainbow = is_rainbow(q, m);
    std::map<std::pair<int, int>, int> mult;
    for (auto [ai, bi] : m.pairs()) {
        auto [v, i] = map.origin_a(ai);
        auto [w, j] = map.origin_b(bi);
        int u = std::min(v, w), x = std::max(v, w);
        ++mult[{u, x}];
    }
    std::vector<SimpleEdge> edges;
    for (const auto& [e, count] : mult) {
        if (count > 1) {
            out.simple = false;
            out.duplicate_edges.push_back(e);
        }
        edges.push_back({e.first, e.second, g.color_of(e.first, e.second)});
    }
    out.h = SimpleGraph(g.n_vertices(), edges);
    return out;
}

// ---------------------------------------------------------------------------
// Rainbow subgraph embedding via an auxiliary matching instance
// ---------------------------------------------------------------------------

/// Host graph with a balanced split (A,B) and an uncolored placement J of the
/// target inside the split. Gamma keeps one slot per a-vertex even when two
/// J-neighborhoods coincide as sets.
struct EmbeddingInstance {
    SimpleGraph host;                          // properly colored
    std::vector<int> side_a, side_b;           // host vertex ids
    std::vector<std::pair<int, int>> j_edges;  // (a-vertex, b-vertex) host ids

    int side_size() const { return static_cast<int>(side_a.size()); }

    void validate() const {
        const int n = host.n_vertices();
        if (static_cast<int>(side_a.size() + side_b.size()) != n ||
            side_a.size() != side_b.size())
            throw Error(ErrorKind::InvalidInput, "split is not balanced");
        std::vector<int> seen(n, 0);
        for (int v : side_a) seen.at(v) += 1;
        for (int v : side_b) seen.at(v) += 1;
        for (int v = 0; v < n; ++v)
            if (seen[v] != 1) throw Error(ErrorKind::InvalidInput, "split is not a partition");
        std::set<int> in_a(side_a.begin(), side_a.end());
        for (auto [a, b] : j_edges) {
            if (!in_a.count(a) || in_a.count(b))
                throw Error(ErrorKind::InvalidInput, "template edge does not cross the split");
            if (!host.has_edge(a, b))
                throw Error(ErrorKind::InvalidInput, "template edge missing from host");
        }
    }

    /// J-neighborhoods indexed by position in side_a.
    std::vector<std::vector<int>> neighborhoods() const {
        std::unordered_map<int, int> idx;
        for (std::size_t i = 0; i < side_a.size(); ++i) idx[side_a[i]] = static_cast<int>(i);
        std::vector<std::vector<int>> ns(side_a.size());
        for (auto [a, b] : j_edges) ns[idx.at(a)].push_back(b);
        for (auto& v : ns) std::sort(v.begin(), v.end());
        return ns;
    }
};

struct EmbeddingAux {
    ColoredBipartiteGraph q;  // A-side i = side_a[i], B-side i = slot of side_a[i]
    ConflictSystem f_q;
    std::vector<std::vector<int>> slots;  // N_a per slot, host vertex ids
};

/// Q joins a-vertex a1 to slot N_{a2} iff N_{a2} is contained in the host
/// neighborhood of a1. Two Q-edges conflict iff their realized host edge sets
/// contain two distinct same-colored edges.
inline EmbeddingAux embedding_auxiliary(const EmbeddingInstance& inst) {
    inst.validate();
    if (!is_proper_coloring(inst.host))
        throw Error(ErrorKind::NotProperColoring, "host coloring must be proper");
    EmbeddingAux out;
    out.slots = inst.neighborhoods();
    const int m = inst.side_size();

    std::vector<std::set<int>> host_nbrs(inst.host.n_vertices());
    for (int v = 0; v < inst.host.n_vertices(); ++v)
        host_nbrs[v] = std::set<int>(inst.host.neighbors(v).begin(), inst.host.neighbors(v).end());

    std::vector<Edge> q_edges;
    int qcolor = 0;
    for (int i = 0; i < m; ++i) {     // a1 = side_a[i]
        for (int s = 0; s < m; ++s) {  // slot of side_a[s]
            bool contained = true;
            for (int b : out.slots[s])
                if (!host_nbrs[inst.side_a[i]].count(b)) {
                    contained = false;
                    break;
                }
            if (contained) q_edges.push_back({i, s, qcolor++});
        }
    }
    out.q = build_graph(m, q_edges);

    // realized colors per Q-edge: color -> unique host edge (proper coloring
    // makes the edge at a fixed a-vertex unique per color)
    auto realized = [&](int i, int s) {
        std::map<Color, std::pair<int, int>> by_color;
        for (int b : out.slots[s]) {
            int a = inst.side_a[i];
            by_color[inst.host.color_of(a, b)] = {std::min(a, b), std::max(a, b)};
        }
        return by_color;
    };
    std::vector<std::map<Color, std::pair<int, int>>> real;
    std::vector<EdgeRef> q_refs;
    for (const Edge& e : out.q.edges()) {
        real.push_back(realized(e.a, e.b));
        q_refs.push_back({e.a, e.b});
    }
    std::vector<std::pair<EdgeRef, EdgeRef>> pairs;
    for (std::size_t i = 0; i < q_refs.size(); ++i)
        for (std::size_t j = i + 1; j < q_refs.size(); ++j) {
            bool conflict = false;
            for (const auto& [c, he] : real[i]) {
                auto it = real[j].find(c);
                if (it != real[j].end() && it->second != he) {
                    conflict = true;
                    break;
                }
            }
            if (conflict) pairs.push_back({q_refs[i], q_refs[j]});
        }
    out.f_q = ConflictSystem::from_pairs(std::move(pairs));
    return out;
}

struct EmbeddingResult {
    std::vector<int> f;  // host vertex bijection, identity on B
    SimpleGraph r;
};

/// Read the embedding off a conflict-free perfect matching of Q; the
/// isomorphism and rainbow properties are verified, not assumed.
inline EmbeddingResult extract_embedding(const EmbeddingInstance& inst, const EmbeddingAux& aux,
                                         const Matching& m) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "matching must be perfect");
    if (!is_conflict_free(m, aux.f_q))
        throw Error(ErrorKind::InvalidInput, "matching must be conflict-free");
    const int n = inst.host.n_vertices();
    const int half = inst.side_size();
    EmbeddingResult out;
    out.f.assign(n, -1);
    for (int v : inst.side_b) out.f[v] = v;
    std::vector<SimpleEdge> r_edges;
    for (int i = 0; i < half; ++i) {
        int s = m.b_of(i);
        out.f[inst.side_a[i]] = inst.side_a[s];
        for (int b : aux.slots[s]) {
            int a = inst.side_a[i];
            r_edges.push_back({std::min(a, b), std::max(a, b), inst.host.color_of(a, b)});
        }
    }
    out.r = SimpleGraph(n, r_edges);

    // verification: f bijective, R rainbow, f an isomorphism R -> J
    std::vector<int> hit(n, 0);
    for (int v = 0; v < n; ++v) {
        if (out.f[v] < 0 || out.f[v] >= n || hit[out.f[v]]++)
            throw Error(ErrorKind::VerificationFailed, "f is not a bijection");
    }
    std::set<Color> colors;
    for (const SimpleEdge& e : out.r.edges())
        if (!colors.insert(e.color).second)
            throw Error(ErrorKind::VerificationFailed, "extracted subgraph is not rainbow");
    std::set<std::pair<int, int>> j_set;
    for (auto [a, b] : inst.j_edges) j_set.insert({std::min(a, b), std::max(a, b)});
    if (j_set.size() != out.r.edges().size())
        throw Error(ErrorKind::VerificationFailed, "edge counts differ");
    for (const SimpleEdge& e : out.r.edges()) {
        int fu = out.f[e.u], fv = out.f[e.v];
        if (!j_set.count({std::min(fu, fv), std::max(fu, fv)}))
            throw Error(ErrorKind::VerificationFailed, "f does not map onto the template");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Balanced splits and small-scale template search
// ---------------------------------------------------------------------------

struct SplitResult {
    std::vector<int> side_a, side_b;
    int min_cross_degree = 0;
    int retries = 0;
};

/// Resample balanced bipartitions until the cross minimum degree keeps pace
/// with the host minimum degree: delta(G') >= (delta(G)/n - gamma/2) * n/2.
inline SplitResult random_balanced_split(const SimpleGraph& g, double gamma, std::uint64_t seed,
                                         int retry_cap = 1000) {
    const int n = g.n_vertices();
    if (n % 2 != 0) throw Error(ErrorKind::InvalidInput, "n must be even");
    const int m = n / 2;
    const double target = (static_cast<double>(g.min_degree()) / n - gamma / 2) * m;
    std::mt19937_64 rng = make_rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> side(n, 0);
        for (int i = m; i < n; ++i) side[perm[i]] = 1;
        int min_cross = n;
        for (int v = 0; v < n; ++v) {
            int c = 0;
            for (int w : g.neighbors(v))
                if (side[w] != side[v]) ++c;
            min_cross = std::min(min_cross, c);
        }
        if (approx_ge(min_cross, target)) {
            SplitResult out;
            out.retries = attempt;
            out.min_cross_degree = min_cross;
            for (int i = 0; i < m; ++i) out.side_a.push_back(perm[i]);
            for (int i = m; i < n; ++i) out.side_b.push_back(perm[i]);
            std::sort(out.side_a.begin(), out.side_a.end());
            std::sort(out.side_b.begin(), out.side_b.end());
            return out;
        }
    }
    throw Error(ErrorKind::RetriesExhausted,
                "no balanced split met the degree bound in " + std::to_string(retry_cap) +
                    " attempts");
}

/// Backtracking search for a copy of a bipartite pattern inside the split's
/// cross edges; small instances only (placements are otherwise an input).
inline std::optional<std::vector<std::pair<int, int>>> find_embedding_template(
    const SimpleGraph& host, const std::vector<int>& side_a, const std::vector<int>& side_b,
    const std::vector<std::pair<int, int>>& pattern_edges, int max_n = 16) {
    const int m = static_cast<int>(side_a.size());
    if (2 * m > max_n) throw Error(ErrorKind::TooLargeForExact, "instance too large");
    if (side_b.size() != side_a.size())
        throw Error(ErrorKind::InvalidInput, "split is not balanced");

    // pattern vertices: A side 0..m-1, B side 0..m-1
    std::vector<std::vector<int>> pat_adj_a(m), pat_adj_b(m);
    for (auto [pa, pb] : pattern_edges) {
        if (pa < 0 || pa >= m || pb < 0 || pb >= m)
            throw Error(ErrorKind::IndexOutOfRange, "pattern vertex out of range");
        pat_adj_a[pa].push_back(pb);
        pat_adj_b[pb].push_back(pa);
    }

    std::vector<int> map_a(m, -1), map_b(m, -1), used_a(m, 0), used_b(m, 0);
    // assign most-constrained (highest degree) pattern vertices first
    std::vector<std::pair<int, int>> order;  // (side 0=A/1=B, pattern index)
    for (int i = 0; i < m; ++i) {
        order.push_back({0, i});
        order.push_back({1, i});
    }
    std::sort(order.begin(), order.end(), [&](auto lhs, auto rhs) {
        int dl = lhs.first == 0 ? (int)pat_adj_a[lhs.second].size() : (int)pat_adj_b[lhs.second].size();
        int dr = rhs.first == 0 ? (int)pat_adj_a[rhs.second].size() : (int)pat_adj_b[rhs.second].size();
        return dl > dr;
    });

    auto ok_a = [&](int pa, int host_slot) {
        for (int pb : pat_adj_a[pa])
            if (map_b[pb] != -1 && !host.has_edge(side_a[host_slot], side_b[map_b[pb]]))
                return false;
        return true;
    };
    auto ok_b = [&](int pb, int host_slot) {
        for (int pa : pat_adj_b[pb])
            if (map_a[pa] != -1 && !host.has_edge(side_a[map_a[pa]], side_b[host_slot]))
                return false;
        return true;
    };

    std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
        if (k == order.size()) return true;
        auto [side, p] = order[k];
        for (int slot = 0; slot < m; ++slot) {
            if (side == 0) {
                if (used_a[slot] || !ok_a(p, slot)) continue;
                used_a[slot] = 1;
                map_a[p] = slot;
                if (go(k + 1)) return true;
                used_a[slot] = 0;
                map_a[p] = -1;
            } else {
                if (used_b[slot] || !ok_b(p, slot)) continue;
                used_b[slot] = 1;
                map_b[p] = slot;
                if (go(k + 1)) return true;
                used_b[slot] = 0;
                map_b[p] = -1;
            }
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    std::vector<std::pair<int, int>> j;
    for (auto [pa, pb] : pattern_edges) j.push_back({side_a[map_a[pa]], side_b[map_b[pb]]});
    return j;
}

}  // namespace rainbow

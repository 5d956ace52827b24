#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

/// Partial injection from side A to side B. Value-like and cheap to copy;
/// operations on matchings are pure functions of (graph, matching).
class Matching {
  public:
    Matching() = default;
    explicit Matching(int n) : a_to_b_(n, -1), b_to_a_(n, -1) {}

    static Matching from_pairs(const ColoredBipartiteGraph& g,
                               const std::vector<std::pair<int, int>>& pairs) {
        Matching m(g.n_per_side());
        for (auto [a, b] : pairs) {
            if (a < 0 || a >= g.n_per_side() || b < 0 || b >= g.n_per_side())
                throw Error(ErrorKind::IndexOutOfRange, "matching pair out of range");
            if (!g.has_edge(a, b))
                throw Error(ErrorKind::InvalidInput, "matching pair (" + std::to_string(a) + "," +
                                                         std::to_string(b) + ") is not an edge");
            if (m.a_to_b_[a] != -1 || m.b_to_a_[b] != -1)
                throw Error(ErrorKind::InvalidInput, "matching pairs are not pairwise non-incident");
            m.set(a, b);
        }
        return m;
    }

    int n() const { return static_cast<int>(a_to_b_.size()); }
    int size() const { return size_; }
    bool perfect() const { return size_ == n() && n() > 0; }

    int b_of(int a) const { return a_to_b_.at(a); }
    int a_of(int b) const { return b_to_a_.at(b); }
    bool contains(int a, int b) const { return a_to_b_.at(a) == b; }

    void set(int a, int b) {
        if (a_to_b_[a] != -1 || b_to_a_[b] != -1)
            throw Error(ErrorKind::InvalidInput, "slot already matched");
        a_to_b_[a] = b;
        b_to_a_[b] = a;
        ++size_;
    }

    void unset(int a) {
        int b = a_to_b_[a];
        if (b == -1) return;
        a_to_b_[a] = -1;
        b_to_a_[b] = -1;
        --size_;
    }

    /// Pairs sorted by a-index.
    std::vector<std::pair<int, int>> pairs() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(size_);
        for (int a = 0; a < n(); ++a)
            if (a_to_b_[a] != -1) out.push_back({a, a_to_b_[a]});
        return out;
    }

    /// Sign of the A->B permutation; requires a perfect matching.
    int permutation_sign() const {
        if (!perfect()) throw Error(ErrorKind::InvalidInput, "sign needs a perfect matching");
        std::vector<bool> seen(n(), false);
        int sign = 1;
        for (int a = 0; a < n(); ++a) {
            if (seen[a]) continue;
            int len = 0;
            for (int c = a; !seen[c]; c = a_to_b_[c]) {
                seen[c] = true;
                ++len;
            }
            if (len % 2 == 0) sign = -sign;
        }
        return sign;
    }

    friend bool operator==(const Matching&, const Matching&) = default;
    friend bool operator<(const Matching& lhs, const Matching& rhs) {
        return lhs.a_to_b_ < rhs.a_to_b_;
    }

  private:
    std::vector<int> a_to_b_;
    std::vector<int> b_to_a_;
    int size_ = 0;
};

/// Maximum matching by Hopcroft-Karp; deterministic for the graph's sorted
/// adjacency order. Returns a perfect matching or nullopt.
inline std::optional<Matching> find_perfect_matching(const ColoredBipartiteGraph& g) {
    const int n = g.n_per_side();
    std::vector<int> match_a(n, -1), match_b(n, -1), dist(n);
    const int INF = n + 1;

    auto bfs = [&]() {
        std::queue<int> q;
        for (int a = 0; a < n; ++a) {
            if (match_a[a] == -1) {
                dist[a] = 0;
                q.push(a);
            } else {
                dist[a] = INF;
            }
        }
        bool reachable = false;
        while (!q.empty()) {
            int a = q.front();
            q.pop();
            for (int b : g.neighbors_of_a(a)) {
                int a2 = match_b[b];
                if (a2 == -1) {
                    reachable = true;
                } else if (dist[a2] == INF) {
                    dist[a2] = dist[a] + 1;
                    q.push(a2);
                }
            }
        }
        return reachable;
    };

    std::function<bool(int)> dfs = [&](int a) -> bool {
        for (int b : g.neighbors_of_a(a)) {
            int a2 = match_b[b];
            if (a2 == -1 || (dist[a2] == dist[a] + 1 && dfs(a2))) {
                match_a[a] = b;
                match_b[b] = a;
                return true;
            }
        }
        dist[a] = INF;
        return false;
    };

    int matched = 0;
    while (bfs())
        for (int a = 0; a < n; ++a)
            if (match_a[a] == -1 && dfs(a)) ++matched;
    if (matched != n) return std::nullopt;

    Matching m(n);
    for (int a = 0; a < n; ++a) m.set(a, match_a[a]);
    return m;
}

/// True iff no conflict pair lies entirely inside m. Rainbow-ness is the
/// special case where f came from a coloring.
inline bool is_conflict_free(const Matching& m, const ConflictSystem& f) {
    for (auto [a, b] : m.pairs())
        for (const EdgeRef& p : f.partners(a, b))
            if (p.first < static_cast<int>(m.n()) && m.contains(p.first, p.second)) return false;
    return true;
}

/// Direct color check: every color used at most once by m's edges.
inline bool is_rainbow(const ColoredBipartiteGraph& g, const Matching& m) {
    std::unordered_set<Color> seen;
    for (auto [a, b] : m.pairs())
        if (!seen.insert(g.color_of(a, b)).second) return false;
    return true;
}

/// One 6-cycle exchange: x = (a1,b1) leaves the matching, y = (a,b) enters,
/// together with the cross edges (partner_of_b, b1) and (a1, partner_of_a).
struct SwitchMove {
    int a1 = -1, b1 = -1;  // x, an edge of the matching
    int a = -1, b = -1;    // y, not in the matching
    int partner_of_b = -1; // a2 with (a2, b) in M
    int partner_of_a = -1; // b2 with (a, b2) in M
};

namespace detail {
inline bool switch_move_valid(const ColoredBipartiteGraph& g, const Matching& m,
                              const SwitchMove& mv) {
    const int n = g.n_per_side();
    auto in_range = [&](int v) { return v >= 0 && v < n; };
    if (!in_range(mv.a1) || !in_range(mv.b1) || !in_range(mv.a) || !in_range(mv.b) ||
        !in_range(mv.partner_of_b) || !in_range(mv.partner_of_a))
        return false;
    // six pairwise distinct vertices (three per side)
    if (mv.a1 == mv.a || mv.a1 == mv.partner_of_b || mv.a == mv.partner_of_b) return false;
    if (mv.b1 == mv.b || mv.b1 == mv.partner_of_a || mv.b == mv.partner_of_a) return false;
    if (!m.contains(mv.a1, mv.b1)) return false;
    if (m.contains(mv.a, mv.b)) return false;
    if (!m.contains(mv.partner_of_b, mv.b) || !m.contains(mv.a, mv.partner_of_a)) return false;
    // all six cycle edges present in the host graph
    return g.has_edge(mv.a, mv.b) && g.has_edge(mv.partner_of_b, mv.b1) &&
           g.has_edge(mv.a1, mv.partner_of_a);
}
}  // namespace detail

/// Canonical move for (x, y); partners are recomputed from m, never stored stale.
inline SwitchMove make_switch_move(const ColoredBipartiteGraph& g, const Matching& m,
                                   EdgeRef x, EdgeRef y) {
    if (x.first < 0 || x.first >= m.n() || !m.contains(x.first, x.second))
        throw Error(ErrorKind::NotInMatching,
                    "(" + std::to_string(x.first) + "," + std::to_string(x.second) + ")");
    SwitchMove mv;
    mv.a1 = x.first;
    mv.b1 = x.second;
    mv.a = y.first;
    mv.b = y.second;
    if (y.first < 0 || y.first >= m.n() || y.second < 0 || y.second >= m.n())
        throw Error(ErrorKind::InvalidMove, "y out of range");
    mv.partner_of_b = m.a_of(y.second);
    mv.partner_of_a = m.b_of(y.first);
    if (!detail::switch_move_valid(g, m, mv)) throw Error(ErrorKind::InvalidMove, "not switchable");
    return mv;
}

/// All edges y such that exchanging along the 6-cycle through x and y yields
/// another perfect matching. Requires m perfect and x in m.
inline std::vector<Edge> switchable_edges(const ColoredBipartiteGraph& g, const Matching& m,
                                          EdgeRef x) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "matching must be perfect");
    if (x.first < 0 || x.first >= m.n() || !m.contains(x.first, x.second))
        throw Error(ErrorKind::NotInMatching,
                    "(" + std::to_string(x.first) + "," + std::to_string(x.second) + ")");
    std::vector<Edge> out;
    for (const Edge& e : g.edges()) {
        if (e.a == x.first || e.b == x.second) continue;   // incident to x
        if (m.contains(e.a, e.b)) continue;                // y must avoid M
        int a2 = m.a_of(e.b);
        int b2 = m.b_of(e.a);
        if (g.has_edge(a2, x.second) && g.has_edge(x.first, b2)) out.push_back(e);
    }
    return out;
}

/// M - {x, (a2,b), (a,b2)} + {(a2,b1), y, (a1,b2)}; perfect stays perfect.
inline Matching apply_switch(const ColoredBipartiteGraph& g, const Matching& m,
                             const SwitchMove& mv) {
    if (!detail::switch_move_valid(g, m, mv)) throw Error(ErrorKind::InvalidMove, "invalid move");
    Matching out = m;
    out.unset(mv.a1);
    out.unset(mv.partner_of_b);
    out.unset(mv.a);
    out.set(mv.partner_of_b, mv.b1);
    out.set(mv.a, mv.b);
    out.set(mv.a1, mv.partner_of_a);
    return out;
}

/// 4-cycle exchange on two matching edges (a1,b1),(a2,b2) -> (a1,b2),(a2,b1).
/// Returns nullopt when either cross edge is absent.
inline std::optional<Matching> try_four_swap(const ColoredBipartiteGraph& g, const Matching& m,
                                             int a1, int a2) {
    if (a1 == a2) return std::nullopt;
    int b1 = m.b_of(a1), b2 = m.b_of(a2);
    if (b1 == -1 || b2 == -1) return std::nullopt;
    if (!g.has_edge(a1, b2) || !g.has_edge(a2, b1)) return std::nullopt;
    Matching out = m;
    out.unset(a1);
    out.unset(a2);
    out.set(a1, b2);
    out.set(a2, b1);
    return out;
}

/// Per-edge switchable counts, for the gamma*n^2 density property.
inline std::map<EdgeRef, int> count_switchable_all(const ColoredBipartiteGraph& g,
                                                   const Matching& m) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "matching must be perfect");
    std::map<EdgeRef, int> out;
    for (auto [a, b] : m.pairs())
        out[{a, b}] = static_cast<int>(switchable_edges(g, m, {a, b}).size());
    return out;
}

}  // namespace rainbow

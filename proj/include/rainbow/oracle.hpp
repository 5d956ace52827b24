#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/matching.hpp"

// Exhaustive ground-truth engines. They rebuild their own adjacency and
// conflict tables from the raw edge/pair lists so that the main modules are
// checked by an independent witness, not by themselves.
namespace rainbow::oracle {

constexpr std::uint64_t kDefaultNodeCap = 10'000'000;

struct EnumerationResult {
    std::vector<Matching> matchings;
    std::uint64_t total_count = 0;  // exact only when !truncated
    bool truncated = false;
    std::size_t cap = 0;
};

namespace detail {

struct RawAdjacency {
    int n = 0;
    std::vector<std::vector<int>> nbr_a;  // a -> b list
    std::vector<std::vector<int>> nbr_b;  // b -> a list

    explicit RawAdjacency(const ColoredBipartiteGraph& g) : n(g.n_per_side()) {
        nbr_a.resize(n);
        nbr_b.resize(n);
        for (const Edge& e : g.edges()) {
            nbr_a[e.a].push_back(e.b);
            nbr_b[e.b].push_back(e.a);
        }
    }
};

}  // namespace detail

/// All perfect matchings, by branching on a lowest-remaining-degree uncovered
/// a-vertex. Complete and duplicate-free when neither cap trips.
inline EnumerationResult enumerate_perfect_matchings(const ColoredBipartiteGraph& g,
                                                     std::size_t cap = 1'000'000,
                                                     std::uint64_t node_cap = kDefaultNodeCap) {
    detail::RawAdjacency adj(g);
    const int n = adj.n;
    EnumerationResult result;
    result.cap = cap;

    std::vector<int> pick_b_of_a(n, -1), taken_b(n, 0), covered_a(n, 0);
    std::uint64_t nodes = 0;
    bool aborted = false;

    std::function<void(int)> go = [&](int depth) {
        if (aborted) return;
        if (++nodes > node_cap) {
            aborted = true;
            return;
        }
        if (depth == n) {
            ++result.total_count;
            if (result.matchings.size() < cap) {
                std::vector<std::pair<int, int>> pairs;
                for (int a = 0; a < n; ++a) pairs.push_back({a, pick_b_of_a[a]});
                result.matchings.push_back(Matching::from_pairs(g, pairs));
            } else {
                aborted = true;  // collected limit reached; stop the walk
            }
            return;
        }
        // branch on the uncovered a with fewest free neighbors
        int best = -1, best_count = n + 1;
        for (int a = 0; a < n; ++a) {
            if (covered_a[a]) continue;
            int c = 0;
            for (int b : adj.nbr_a[a])
                if (!taken_b[b]) ++c;
            if (c < best_count) {
                best_count = c;
                best = a;
            }
        }
        if (best_count == 0) return;  // dead branch
        covered_a[best] = 1;
        for (int b : adj.nbr_a[best]) {
            if (taken_b[b]) continue;
            taken_b[b] = 1;
            pick_b_of_a[best] = b;
            go(depth + 1);
            taken_b[b] = 0;
            if (aborted) break;
        }
        pick_b_of_a[best] = -1;
        covered_a[best] = 0;
    };
    go(0);
    result.truncated = aborted;
    return result;
}

struct ExistenceResult {
    enum class Kind { Yes, No, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<Matching> witness;
    std::uint64_t nodes_expanded = 0;
};

/// Backtracking with conflict pruning: an edge is admissible only if it
/// conflicts with no edge already chosen. No is definitive; Unknown means the
/// node cap tripped first.
inline ExistenceResult exists_conflict_free_pm(const ColoredBipartiteGraph& g,
                                               const ConflictSystem& f,
                                               std::uint64_t node_cap = kDefaultNodeCap) {
    detail::RawAdjacency adj(g);
    const int n = adj.n;

    // independent conflict table, rebuilt from the raw pair list
    std::unordered_map<std::uint64_t, std::vector<EdgeRef>> conflict;
    for (const auto& pr : f.pairs()) {
        conflict[edge_key(pr.first)].push_back(pr.second);
        conflict[edge_key(pr.second)].push_back(pr.first);
    }

    ExistenceResult result;
    std::vector<int> pick_b_of_a(n, -1), taken_b(n, 0), covered_a(n, 0);
    bool aborted = false;

    auto admissible = [&](int a, int b) {
        auto it = conflict.find(edge_key(a, b));
        if (it == conflict.end()) return true;
        for (const EdgeRef& e : it->second)
            if (covered_a[e.first] && pick_b_of_a[e.first] == e.second) return false;
        return true;
    };

    std::function<bool(int)> go = [&](int depth) -> bool {
        if (++result.nodes_expanded > node_cap) {
            aborted = true;
            return false;
        }
        if (depth == n) return true;
        int best = -1, best_count = n + 1;
        for (int a = 0; a < n; ++a) {
            if (covered_a[a]) continue;
            int c = 0;
            for (int b : adj.nbr_a[a])
                if (!taken_b[b] && admissible(a, b)) ++c;
            if (c < best_count) {
                best_count = c;
                best = a;
            }
        }
        if (best_count == 0) return false;
        covered_a[best] = 1;
        for (int b : adj.nbr_a[best]) {
            if (taken_b[b] || !admissible(best, b)) continue;
            taken_b[b] = 1;
            pick_b_of_a[best] = b;
            if (go(depth + 1)) return true;
            taken_b[b] = 0;
            pick_b_of_a[best] = -1;
            if (aborted) break;
        }
        covered_a[best] = 0;
        return false;
    };

    if (go(0)) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < n; ++a) pairs.push_back({a, pick_b_of_a[a]});
        result.kind = ExistenceResult::Kind::Yes;
        result.witness = Matching::from_pairs(g, pairs);
    } else {
        result.kind = aborted ? ExistenceResult::Kind::Unknown : ExistenceResult::Kind::No;
    }
    return result;
}

/// Number of 6-cycles through the matching edge x that use exactly two other
/// matching edges, by direct cycle enumeration over ordered pairs of matching
/// edges (no reuse of the switching code).
inline int count_6cycles_through(const ColoredBipartiteGraph& g, const Matching& m, EdgeRef x) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "matching must be perfect");
    if (!m.contains(x.first, x.second)) throw Error(ErrorKind::NotInMatching, "x not in matching");
    const int a1 = x.first, b1 = x.second;
    int count = 0;
    // cycle a1 b1 a2 b2 a3 b3 with (a2,b2),(a3,b3) in M and the connecting
    // edges b1a2, b2a3, b3a1 in the graph
    for (auto [a2, b2] : m.pairs()) {
        if (a2 == a1) continue;
        if (!g.has_edge(a2, b1)) continue;
        for (auto [a3, b3] : m.pairs()) {
            if (a3 == a1 || a3 == a2) continue;
            if (g.has_edge(a3, b2) && g.has_edge(a1, b3)) ++count;
        }
    }
    return count;
}

/// The entering edges of the cycles behind count_6cycles_through: for the
/// cycle a1 b1 a2 b2 a3 b3 the non-matching edge avoiding x is (a3, b2).
/// Kept as an independent walk for exact set-equality checks.
inline std::vector<EdgeRef> switch_targets_through(const ColoredBipartiteGraph& g,
                                                   const Matching& m, EdgeRef x) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "matching must be perfect");
    if (!m.contains(x.first, x.second)) throw Error(ErrorKind::NotInMatching, "x not in matching");
    const int a1 = x.first, b1 = x.second;
    std::vector<EdgeRef> out;
    for (auto [a2, b2] : m.pairs()) {
        if (a2 == a1) continue;
        if (!g.has_edge(a2, b1)) continue;
        for (auto [a3, b3] : m.pairs()) {
            if (a3 == a1 || a3 == a2) continue;
            if (g.has_edge(a3, b2) && g.has_edge(a1, b3)) out.push_back({a3, b2});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Number of 6-cycles through a NON-matching edge x whose other alternating
/// edges all lie in M. The third matching edge determines the cycle, so this
/// count is at most n.
inline int count_6cycles_three_matching(const ColoredBipartiteGraph& g, const Matching& m,
                                        EdgeRef x) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "matching must be perfect");
    if (m.contains(x.first, x.second))
        throw Error(ErrorKind::InvalidInput, "x must not be in the matching");
    const int a = x.first, b = x.second;
    const int bp = m.b_of(a);  // matching edge at a
    const int ap = m.a_of(b);  // matching edge at b
    int count = 0;
    for (auto [a5, b5] : m.pairs()) {
        if (a5 == a || a5 == ap) continue;
        if (b5 == bp) continue;
        if (g.has_edge(a5, bp) && g.has_edge(ap, b5)) ++count;
    }
    return count;
}

/// Existence check by filtering full enumeration; cross-check for the
/// backtracking path (agrees whenever enumeration completes).
inline std::optional<bool> exists_by_enumeration(const ColoredBipartiteGraph& g,
                                                 const ConflictSystem& f,
                                                 std::size_t cap = 1'000'000) {
    EnumerationResult all = enumerate_perfect_matchings(g, cap);
    if (all.truncated) return std::nullopt;
    for (const Matching& m : all.matchings)
        if (is_conflict_free(m, f)) return true;
    return false;
}

}  // namespace rainbow::oracle

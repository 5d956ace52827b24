#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rainbow/error.hpp"
#include "rainbow/util.hpp"

namespace rainbow {

using Color = int;

/// An edge of a balanced bipartite graph: a and b index into the two sides
/// independently (both ranges are [0, n_per_side)).
struct Edge {
    int a = -1;
    int b = -1;
    Color color = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Canonical identifier of an edge position, ignoring its color.
using EdgeRef = std::pair<int, int>;

inline std::uint64_t edge_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}
inline std::uint64_t edge_key(const EdgeRef& e) { return edge_key(e.first, e.second); }

/// Balanced bipartite graph with one color label per edge. Immutable after
/// construction; adjacency lists are sorted and derived from the edge set.
class ColoredBipartiteGraph {
  public:
    ColoredBipartiteGraph() = default;

    ColoredBipartiteGraph(int n_per_side, std::vector<Edge> edges) : n_(n_per_side) {
        if (n_per_side <= 0) throw Error(ErrorKind::InvalidInput, "n_per_side must be positive");
        std::sort(edges.begin(), edges.end());
        adj_a_.resize(n_);
        adj_b_.resize(n_);
        color_by_key_.reserve(edges.size());
        for (const Edge& e : edges) {
            if (e.a < 0 || e.a >= n_ || e.b < 0 || e.b >= n_)
                throw Error(ErrorKind::IndexOutOfRange,
                            "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ") with n=" +
                                std::to_string(n_));
            if (e.color < 0) throw Error(ErrorKind::InvalidInput, "negative color id");
            if (!color_by_key_.emplace(edge_key(e.a, e.b), e.color).second)
                throw Error(ErrorKind::DuplicateEdge,
                            "(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
            adj_a_[e.a].push_back(e.b);
            adj_b_[e.b].push_back(e.a);
        }
        edges_ = std::move(edges);
    }

    int n_per_side() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(int a, int b) const { return color_by_key_.count(edge_key(a, b)) > 0; }

    Color color_of(int a, int b) const {
        auto it = color_by_key_.find(edge_key(a, b));
        if (it == color_by_key_.end())
            throw Error(ErrorKind::IndexOutOfRange,
                        "no edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
        return it->second;
    }

    const std::vector<int>& neighbors_of_a(int a) const { return adj_a_.at(a); }
    const std::vector<int>& neighbors_of_b(int b) const { return adj_b_.at(b); }
    int degree_a(int a) const { return static_cast<int>(adj_a_.at(a).size()); }
    int degree_b(int b) const { return static_cast<int>(adj_b_.at(b).size()); }

    int min_degree() const {
        int d = n_;
        for (int v = 0; v < n_; ++v) d = std::min({d, degree_a(v), degree_b(v)});
        return d;
    }

  private:
    int n_ = 0;
    std::vector<Edge> edges_;                  // canonical (a,b) order
    std::vector<std::vector<int>> adj_a_;      // a -> sorted b neighbors
    std::vector<std::vector<int>> adj_b_;      // b -> sorted a neighbors
    std::unordered_map<std::uint64_t, Color> color_by_key_;
};

inline ColoredBipartiteGraph build_graph(int n_per_side, const std::vector<Edge>& edges) {
    return ColoredBipartiteGraph(n_per_side, edges);
}

/// Minimum degree at least ceil(n/2) on both sides. Integer degrees force the
/// ceiling reading of "at least n/2" for odd n.
inline bool is_dirac(const ColoredBipartiteGraph& g) {
    int need = (g.n_per_side() + 1) / 2;
    return g.min_degree() >= need;
}

/// Largest color class size; 0 for an edgeless graph.
inline int coloring_bound(const ColoredBipartiteGraph& g) {
    std::unordered_map<Color, int> count;
    int best = 0;
    for (const Edge& e : g.edges()) best = std::max(best, ++count[e.color]);
    return best;
}

/// Set of unordered pairs of edges that may not appear together in a subgraph.
/// Edges are referenced by canonical (a,b) position so the system survives
/// subgraph operations on the same vertex numbering.
class ConflictSystem {
  public:
    ConflictSystem() = default;

    static ConflictSystem from_pairs(std::vector<std::pair<EdgeRef, EdgeRef>> pairs) {
        ConflictSystem f;
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(pairs.size() * 2);
        for (auto& pr : pairs) {
            if (pr.second < pr.first) std::swap(pr.first, pr.second);
            if (pr.first == pr.second)
                throw Error(ErrorKind::InvalidInput, "conflict pair contains an edge twice");
            std::uint64_t h = edge_key(pr.first) * 0x9e3779b97f4a7c15ULL ^ edge_key(pr.second);
            if (!seen.insert(h).second) {
                // hash collision or duplicate; disambiguate by exact scan
                bool dup = false;
                for (const auto& q : f.pairs_)
                    if (q == pr) { dup = true; break; }
                if (dup) throw Error(ErrorKind::InvalidInput, "conflict pair listed twice");
            }
            f.pairs_.push_back(pr);
            f.partners_[edge_key(pr.first)].push_back(pr.second);
            f.partners_[edge_key(pr.second)].push_back(pr.first);
        }
        for (const auto& [k, v] : f.partners_)
            f.bound_ = std::max(f.bound_, static_cast<int>(v.size()));
        return f;
    }

    const std::vector<std::pair<EdgeRef, EdgeRef>>& pairs() const { return pairs_; }

    /// Max number of conflicts any single edge participates in.
    int bound() const { return bound_; }

    const std::vector<EdgeRef>& partners(int a, int b) const {
        auto it = partners_.find(edge_key(a, b));
        return it == partners_.end() ? empty_ : it->second;
    }

    bool conflicts(const EdgeRef& e, const EdgeRef& f) const {
        const auto& ps = partners(e.first, e.second);
        return std::find(ps.begin(), ps.end(), f) != ps.end();
    }

  private:
    std::vector<std::pair<EdgeRef, EdgeRef>> pairs_;
    std::unordered_map<std::uint64_t, std::vector<EdgeRef>> partners_;
    std::vector<EdgeRef> empty_;
    int bound_ = 0;
};

/// All distinct same-colored edge pairs of g. A k-bounded coloring yields a
/// (k-1)-bounded system.
inline ConflictSystem conflicts_from_coloring(const ColoredBipartiteGraph& g) {
    std::map<Color, std::vector<EdgeRef>> classes;
    for (const Edge& e : g.edges()) classes[e.color].push_back({e.a, e.b});
    std::vector<std::pair<EdgeRef, EdgeRef>> pairs;
    for (const auto& [c, es] : classes)
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j) pairs.push_back({es[i], es[j]});
    return ConflictSystem::from_pairs(std::move(pairs));
}

}  // namespace rainbow

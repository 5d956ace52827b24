#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/matching.hpp"
#include "rainbow/params.hpp"
#include "rainbow/util.hpp"

namespace rainbow {

enum class Side { A, B };

inline const char* to_string(Side s) { return s == Side::A ? "A" : "B"; }

/// Opposite-side vertices with at least ceil(nu*n) neighbors inside x.
/// Integer degrees force the ceiling reading of the nu*n threshold.
inline std::vector<int> robust_neighborhood(const ColoredBipartiteGraph& g, Side side,
                                            const std::vector<int>& x, double nu) {
    const int n = g.n_per_side();
    std::vector<char> in_x(n, 0);
    for (int v : x) {
        if (v < 0 || v >= n) throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
        in_x[v] = 1;
    }
    const int need = std::max(1, ceil_threshold(nu * n));
    std::vector<int> rn;
    for (int v = 0; v < n; ++v) {
        const std::vector<int>& nbrs = side == Side::A ? g.neighbors_of_b(v) : g.neighbors_of_a(v);
        int count = 0;
        for (int u : nbrs)
            if (in_x[u]) ++count;
        if (count >= need) rn.push_back(v);
    }
    return rn;
}

struct ExpanderWitness {
    Side side = Side::A;
    std::vector<int> x;
    std::vector<int> rn;
};

struct ExpanderResult {
    bool is_expander = false;
    bool certified = false;  // exact subset enumeration ran clean
    std::uint64_t sets_checked = 0;
    std::optional<ExpanderWitness> witness;
};

namespace detail {

struct BitAdjacency {
    int n;
    std::vector<std::uint64_t> of_b;  // mask over A-side for each b
    std::vector<std::uint64_t> of_a;  // mask over B-side for each a

    explicit BitAdjacency(const ColoredBipartiteGraph& g) : n(g.n_per_side()) {
        of_b.assign(n, 0);
        of_a.assign(n, 0);
        for (const Edge& e : g.edges()) {
            of_b[e.b] |= std::uint64_t{1} << e.a;
            of_a[e.a] |= std::uint64_t{1} << e.b;
        }
    }
};

/// |RN_nu(X)| for X given as a bitmask over `side`.
inline int rn_size(const BitAdjacency& adj, Side side, std::uint64_t mask, int need) {
    const auto& rows = side == Side::A ? adj.of_b : adj.of_a;
    int size = 0;
    for (int v = 0; v < adj.n; ++v)
        if (std::popcount(rows[v] & mask) >= need) ++size;
    return size;
}

inline std::vector<int> mask_to_set(std::uint64_t mask, int n) {
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (mask >> v & 1) out.push_back(v);
    return out;
}

/// Enumerates every one-sided X in the size window and collects up to
/// `max_witnesses` violating sets.
inline ExpanderResult expander_scan(const ColoredBipartiteGraph& g, double nu, double tau,
                                    int max_n, std::size_t max_witnesses,
                                    std::vector<ExpanderWitness>* all_witnesses) {
    const int n = g.n_per_side();
    if (n > max_n)
        throw Error(ErrorKind::TooLargeForExact,
                    "n=" + std::to_string(n) + " exceeds " + std::to_string(max_n));
    if (!(nu <= tau)) throw Error(ErrorKind::InvalidInput, "expander test needs nu <= tau");
    BitAdjacency adj(g);
    const int need = std::max(1, ceil_threshold(nu * n));
    const int lo = std::max(1, ceil_threshold(tau * n));
    const int hi = std::min(n, floor_threshold((1 - tau) * n));
    ExpanderResult result;
    result.certified = true;
    result.is_expander = true;
    for (Side side : {Side::A, Side::B}) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            int size = std::popcount(mask);
            if (size < lo || size > hi) continue;
            ++result.sets_checked;
            int rn = rn_size(adj, side, mask, need);
            if (!approx_ge(rn, size + nu * n)) {
                ExpanderWitness w{side, mask_to_set(mask, n), {}};
                // materialize RN for the certificate
                const auto& rows = side == Side::A ? adj.of_b : adj.of_a;
                for (int v = 0; v < n; ++v)
                    if (std::popcount(rows[v] & mask) >= need) w.rn.push_back(v);
                result.is_expander = false;
                if (!result.witness) result.witness = w;
                if (all_witnesses) {
                    all_witnesses->push_back(std::move(w));
                    if (all_witnesses->size() >= max_witnesses) return result;
                } else {
                    return result;
                }
            }
        }
    }
    return result;
}

}  // namespace detail

/// Checks every X on either side with tau*n <= |X| <= (1-tau)*n; a returned
/// witness is a certified counterexample, a clean scan certifies expansion.
inline ExpanderResult is_robust_expander_exact(const ColoredBipartiteGraph& g, double nu,
                                               double tau, int max_n = 14) {
    return detail::expander_scan(g, nu, tau, max_n, 1, nullptr);
}

/// Samples random subsets in the size window plus structured candidates
/// (vertex neighborhoods, degree-sorted prefixes). Can only certify failure
/// (a found witness), never expansion.
inline ExpanderResult is_robust_expander_randomized(const ColoredBipartiteGraph& g, double nu,
                                                    double tau, int trials, std::uint64_t seed) {
    if (!(nu <= tau)) throw Error(ErrorKind::InvalidInput, "expander test needs nu <= tau");
    const int n = g.n_per_side();
    const int lo = std::max(1, ceil_threshold(tau * n));
    const int hi = std::min(n, floor_threshold((1 - tau) * n));
    ExpanderResult result;
    result.is_expander = true;
    result.certified = false;
    if (lo > hi) return result;

    auto check = [&](Side side, std::vector<int> x) -> bool {
        int size = static_cast<int>(x.size());
        if (size < lo || size > hi) return true;
        ++result.sets_checked;
        auto rn = robust_neighborhood(g, side, x, nu);
        if (approx_ge(static_cast<double>(rn.size()), size + nu * n)) return true;
        result.is_expander = false;
        result.witness = ExpanderWitness{side, std::move(x), std::move(rn)};
        return false;
    };

    // structured candidates: neighborhoods and degree-sorted prefixes
    for (Side side : {Side::A, Side::B}) {
        for (int u = 0; u < n; ++u) {
            const auto& nbrs = side == Side::A ? g.neighbors_of_a(u) : g.neighbors_of_b(u);
            if (!check(side == Side::A ? Side::B : Side::A, nbrs)) return result;
        }
        std::vector<int> by_degree(n);
        std::iota(by_degree.begin(), by_degree.end(), 0);
        std::stable_sort(by_degree.begin(), by_degree.end(), [&](int a, int b) {
            int da = side == Side::A ? g.degree_a(a) : g.degree_b(a);
            int db = side == Side::A ? g.degree_a(b) : g.degree_b(b);
            return da < db;
        });
        for (int size = lo; size <= hi; ++size)
            if (!check(side, std::vector<int>(by_degree.begin(), by_degree.begin() + size)))
                return result;
    }
    // random subsets of uniform size
    std::mt19937_64 rng = make_rng(seed);
    std::uniform_int_distribution<int> pick_size(lo, hi);
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int t = 0; t < trials; ++t) {
        Side side = (rng() & 1) ? Side::A : Side::B;
        int size = pick_size(rng);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> x(pool.begin(), pool.begin() + size);
        std::sort(x.begin(), x.end());
        if (!check(side, std::move(x))) return result;
    }
    return result;
}

/// Side partitions A = A1 u A2, B = B1 u B2.
struct PartitionPair {
    std::vector<int> a1, a2, b1, b2;

    void validate(int n) const {
        auto check_side = [&](const std::vector<int>& p1, const std::vector<int>& p2,
                              const char* side) {
            std::vector<int> seen(n, 0);
            for (int v : p1) {
                if (v < 0 || v >= n) throw Error(ErrorKind::IndexOutOfRange, "partition vertex");
                ++seen[v];
            }
            for (int v : p2) {
                if (v < 0 || v >= n) throw Error(ErrorKind::IndexOutOfRange, "partition vertex");
                ++seen[v];
            }
            for (int v = 0; v < n; ++v)
                if (seen[v] != 1)
                    throw Error(ErrorKind::InvalidInput,
                                std::string("side ") + side + " is not partitioned");
        };
        check_side(a1, a2, "A");
        check_side(b1, b2, "B");
    }

    int ell() const { return static_cast<int>(a1.size()) - static_cast<int>(b1.size()); }
};

namespace detail {

struct PartMasks {
    std::vector<char> a1, b1;  // membership flags; a2/b2 are complements

    PartMasks(const ColoredBipartiteGraph& g, const PartitionPair& p) {
        a1.assign(g.n_per_side(), 0);
        b1.assign(g.n_per_side(), 0);
        for (int v : p.a1) a1[v] = 1;
        for (int v : p.b1) b1[v] = 1;
    }
};

/// Degree of a-vertex v into B1 (true) or B2 (false).
inline int deg_a_into(const ColoredBipartiteGraph& g, const PartMasks& m, int v, bool into_b1) {
    int c = 0;
    for (int b : g.neighbors_of_a(v))
        if (static_cast<bool>(m.b1[b]) == into_b1) ++c;
    return c;
}

inline int deg_b_into(const ColoredBipartiteGraph& g, const PartMasks& m, int v, bool into_a1) {
    int c = 0;
    for (int a : g.neighbors_of_b(v))
        if (static_cast<bool>(m.a1[a]) == into_a1) ++c;
    return c;
}

}  // namespace detail

struct ExtremalReport {
    bool p1 = false, p2 = false, p3 = false;
    double p1_slack = 0, p2_slack = 0, p3_slack = 0;  // threshold minus measured value
    long long cross_edges = 0;                        // e(A1, B2)

    bool ok() const { return p1 && p2 && p3; }
};

/// P1: ||A1|-|A2|| <= eps*n.  P2: ||B1|-|B2|| <= eps*n.  P3: e(A1,B2) <= eps*n^2.
inline ExtremalReport is_extremal(const ColoredBipartiteGraph& g, const PartitionPair& p,
                                  double epsilon) {
    const int n = g.n_per_side();
    p.validate(n);
    detail::PartMasks masks(g, p);
    ExtremalReport r;
    double d1 = std::abs(static_cast<double>(p.a1.size()) - static_cast<double>(p.a2.size()));
    double d2 = std::abs(static_cast<double>(p.b1.size()) - static_cast<double>(p.b2.size()));
    for (int v : p.a1) r.cross_edges += detail::deg_a_into(g, masks, v, false);
    r.p1_slack = epsilon * n - d1;
    r.p2_slack = epsilon * n - d2;
    r.p3_slack = epsilon * n * n - static_cast<double>(r.cross_edges);
    r.p1 = approx_ge(r.p1_slack, 0);
    r.p2 = approx_ge(r.p2_slack, 0);
    r.p3 = approx_ge(r.p3_slack, 0);
    return r;
}

/// Per-property report for the nine superextremal conditions.
struct SuperextremalReport {
    struct Item {
        bool ok = true;
        double slack = 0;  // nonnegative iff ok (vacuous checks get slack 0)
        std::string note;
    };
    Item q[9];
    int ell = 0;

    bool ok() const {
        for (const Item& item : q)
            if (!item.ok) return false;
        return true;
    }
    int first_violated() const {  // 1-based, 0 when all hold
        for (int i = 0; i < 9; ++i)
            if (!q[i].ok) return i + 1;
        return 0;
    }
};

inline SuperextremalReport check_superextremal(const ColoredBipartiteGraph& g,
                                               const PartitionPair& p, double nu1, double nu2) {
    const int n = g.n_per_side();
    p.validate(n);
    detail::PartMasks masks(g, p);
    SuperextremalReport r;
    r.ell = p.ell();

    auto set_item = [&](int idx, double slack, std::string note = {}) {
        r.q[idx].slack = slack;
        r.q[idx].ok = approx_ge(slack, 0);
        r.q[idx].note = std::move(note);
    };

    // Q1/Q3: all but at most nu1*n vertices of each part see >= n/2 - nu1*n
    // inside their own part. Q2/Q4: everyone sees >= nu2*n inside their part.
    const double big_threshold = n / 2.0 - nu1 * n;
    auto count_small = [&](const std::vector<int>& part, bool a_side, bool into_first) {
        int violators = 0;
        int min_deg = n;
        for (int v : part) {
            int d = a_side ? detail::deg_a_into(g, masks, v, into_first)
                           : detail::deg_b_into(g, masks, v, into_first);
            min_deg = std::min(min_deg, d);
            if (!approx_ge(d, big_threshold)) ++violators;
        }
        return std::pair<int, int>{violators, part.empty() ? n : min_deg};
    };
    auto [va1, ma1] = count_small(p.a1, true, true);
    auto [va2, ma2] = count_small(p.a2, true, false);
    auto [vb1, mb1] = count_small(p.b1, false, true);
    auto [vb2, mb2] = count_small(p.b2, false, false);
    set_item(0, nu1 * n - std::max(va1, va2), "A-side near-half degree exceptions");
    set_item(1, std::min(ma1, ma2) - nu2 * n, "A-side part degree floor");
    set_item(2, nu1 * n - std::max(vb1, vb2), "B-side near-half degree exceptions");
    set_item(3, std::min(mb1, mb2) - nu2 * n, "B-side part degree floor");

    // Q5: | |A1|-|B1| | and | |A1|-|A2| | within nu1*n
    double q5a = std::abs(static_cast<double>(p.a1.size()) - static_cast<double>(p.b1.size()));
    double q5b = std::abs(static_cast<double>(p.a1.size()) - static_cast<double>(p.a2.size()));
    set_item(4, nu1 * n - std::max(q5a, q5b), "part size balance");

    // Q6/Q7: cross degrees capped by nu2*n unless |A1| == |B1|
    if (p.a1.size() == p.b1.size()) {
        set_item(5, 0, "vacuous: |A1| == |B1|");
        set_item(6, 0, "vacuous: |A1| == |B1|");
        r.q[5].ok = r.q[6].ok = true;
    } else {
        int max_a1_cross = 0, max_b2_cross = 0;
        for (int v : p.a1) max_a1_cross = std::max(max_a1_cross, detail::deg_a_into(g, masks, v, false));
        for (int v : p.b2) max_b2_cross = std::max(max_b2_cross, detail::deg_b_into(g, masks, v, true));
        set_item(5, nu2 * n - max_a1_cross, "A1 -> B2 cross degree cap");
        set_item(6, nu2 * n - max_b2_cross, "B2 -> A1 cross degree cap");
    }

    // Q8: |A1| >= |B1|
    set_item(7, static_cast<double>(p.a1.size()) - static_cast<double>(p.b1.size()),
             "|A1| >= |B1|");

    // Q9: every v in A1 has e(v,B2) >= ell/2, or every v in B2 has e(v,A1) >= ell/2
    {
        double min_a1 = n, min_b2 = n;
        for (int v : p.a1) min_a1 = std::min<double>(min_a1, detail::deg_a_into(g, masks, v, false));
        for (int v : p.b2) min_b2 = std::min<double>(min_b2, detail::deg_b_into(g, masks, v, true));
        double half_ell = std::max(0, r.ell) / 2.0;
        double slack = std::max(min_a1 - half_ell, min_b2 - half_ell);
        set_item(8, slack, "cross degree >= ell/2 on one side");
    }
    return r;
}

/// Classifier verdict: a certified (or sampled) robust-expander conclusion, or
/// an extremal partition that re-validates at the stated epsilon.
struct Classification {
    enum class Verdict { RobustExpander, Extremal };
    Verdict verdict = Verdict::RobustExpander;
    double nu = 0, tau = 0;
    std::uint64_t sets_checked = 0;
    bool certified = false;
    bool warning = false;  // set when the extremal ladder exhausted and the
                           // verdict fell back to the uncertified expander claim
    double epsilon = 0;
    std::optional<PartitionPair> partition;
    std::optional<ExpanderWitness> witness;
};

namespace detail {

inline PartitionPair partition_from_witness(const ColoredBipartiteGraph& g,
                                            const ExpanderWitness& w, double nu) {
    const int n = g.n_per_side();
    std::vector<char> in_x(n, 0), in_rn(n, 0);
    for (int v : w.x) in_x[v] = 1;
    for (int v : w.rn) in_rn[v] = 1;
    PartitionPair p;
    if (w.side == Side::A) {
        // A1 = X, B1 = RN(X): the non-expanding set keeps its neighborhood
        for (int v = 0; v < n; ++v) (in_x[v] ? p.a1 : p.a2).push_back(v);
        for (int v = 0; v < n; ++v) (in_rn[v] ? p.b1 : p.b2).push_back(v);
    } else {
        // mirrored: B2 = X, A1 = complement of RN(X), so e(A1,B2) stays small
        for (int v = 0; v < n; ++v) (in_rn[v] ? p.a2 : p.a1).push_back(v);
        for (int v = 0; v < n; ++v) (in_x[v] ? p.b2 : p.b1).push_back(v);
    }
    (void)nu;
    return p;
}

}  // namespace detail

/// Dichotomy: certify robust expansion, or derive an extremal partition from a
/// failing set. When the configured epsilon is too tight for the witness
/// partition the check retries on a widening epsilon ladder (and over other
/// collected witnesses); if everything fails, the uncertified expander verdict
/// is returned with the warning flag set.
inline Classification classify(const ColoredBipartiteGraph& g, const ParamSet& params) {
    params.validate();
    if (!is_dirac(g)) throw Error(ErrorKind::NotDirac, "classify requires a Dirac input");
    const int n = g.n_per_side();
    Classification out;
    out.nu = params.nu;
    out.tau = params.tau;

    std::vector<ExpanderWitness> witnesses;
    ExpanderResult er;
    if (n <= params.expander_exact_max_n) {
        er = detail::expander_scan(g, params.nu, params.tau, params.expander_exact_max_n, 64,
                                   &witnesses);
    } else {
        er = is_robust_expander_randomized(g, params.nu, params.tau, 200 + 50 * n, params.seed);
        if (er.witness) witnesses.push_back(*er.witness);
    }
    out.sets_checked = er.sets_checked;
    out.certified = er.certified && er.is_expander;
    if (er.is_expander) {
        out.verdict = Classification::Verdict::RobustExpander;
        return out;
    }

    for (double eps = params.epsilon; eps <= 0.9 + kThresholdGuard; eps *= 1.5) {
        for (const ExpanderWitness& w : witnesses) {
            PartitionPair p = detail::partition_from_witness(g, w, params.nu);
            if (is_extremal(g, p, eps).ok()) {
                out.verdict = Classification::Verdict::Extremal;
                out.epsilon = eps;
                out.partition = std::move(p);
                out.witness = w;
                out.certified = true;
                return out;
            }
        }
    }
    // ladder exhausted; fall back to the (uncertified) expander claim
    out.verdict = Classification::Verdict::RobustExpander;
    out.warning = true;
    out.certified = false;
    out.witness = witnesses.empty() ? std::nullopt : std::optional(witnesses.front());
    return out;
}

/// Moon-Moser sufficient condition on sorted degree sequences: d(r_k) > k and
/// d(s_k) > k for 1 <= k <= m/2. Implies a Hamiltonian cycle, hence a perfect
/// matching; used as a certificate only (false proves nothing).
inline bool moon_moser_degrees(std::vector<int> deg_a, std::vector<int> deg_b) {
    if (deg_a.size() != deg_b.size())
        throw Error(ErrorKind::InvalidInput, "balanced graph required");
    std::sort(deg_a.begin(), deg_a.end());
    std::sort(deg_b.begin(), deg_b.end());
    const int m = static_cast<int>(deg_a.size());
    for (int k = 1; 2 * k <= m; ++k)
        if (deg_a[k - 1] <= k || deg_b[k - 1] <= k) return false;
    return true;
}

inline bool moon_moser_check(const ColoredBipartiteGraph& f) {
    std::vector<int> da(f.n_per_side()), db(f.n_per_side());
    for (int v = 0; v < f.n_per_side(); ++v) {
        da[v] = f.degree_a(v);
        db[v] = f.degree_b(v);
    }
    return moon_moser_degrees(std::move(da), std::move(db));
}

/// Refine an extremal partition into a superextremal one: move vertices whose
/// in-part degree drops below n/4 across, relabel so |A1| >= |B1|, then shed
/// high-cross-degree vertices from A1/B2 to close the size gap when possible.
/// Throws RefinementFailed naming the first violated property otherwise.
inline PartitionPair refine_to_superextremal(const ColoredBipartiteGraph& g,
                                             const PartitionPair& input, const ParamSet& params) {
    const int n = g.n_per_side();
    input.validate(n);
    detail::PartMasks masks(g, input);

    auto move_threshold = n / 4.0;
    // strict <: boundary vertices stay put (a vertex at exactly n/4 on both
    // sides would otherwise oscillate the whole part at desk scale)
    std::set<int> x12, x22, y12, y22;
    for (int v : input.a1)
        if (detail::deg_a_into(g, masks, v, true) < move_threshold - kThresholdGuard) x12.insert(v);
    for (int v : input.a2)
        if (detail::deg_a_into(g, masks, v, false) < move_threshold - kThresholdGuard) x22.insert(v);
    for (int v : input.b1)
        if (detail::deg_b_into(g, masks, v, true) < move_threshold - kThresholdGuard) y12.insert(v);
    for (int v : input.b2)
        if (detail::deg_b_into(g, masks, v, false) < move_threshold - kThresholdGuard) y22.insert(v);

    auto moved = [](const std::vector<int>& keep_from, const std::set<int>& out,
                    const std::set<int>& in) {
        std::vector<int> r;
        for (int v : keep_from)
            if (!out.count(v)) r.push_back(v);
        r.insert(r.end(), in.begin(), in.end());
        std::sort(r.begin(), r.end());
        return r;
    };
    PartitionPair p;
    p.a1 = moved(input.a1, x12, x22);
    p.a2 = moved(input.a2, x22, x12);
    p.b1 = moved(input.b1, y12, y22);
    p.b2 = moved(input.b2, y22, y12);

    if (p.a1.size() < p.b1.size()) {
        std::swap(p.a1, p.a2);
        std::swap(p.b1, p.b2);
    }

    detail::PartMasks moved_masks(g, p);
    const double cross_threshold = params.nu4 * n;
    std::vector<int> x13, y23;
    for (int v : p.a1)
        if (approx_ge(detail::deg_a_into(g, moved_masks, v, false), cross_threshold))
            x13.push_back(v);
    for (int v : p.b2)
        if (approx_ge(detail::deg_b_into(g, moved_masks, v, true), cross_threshold))
            y23.push_back(v);

    const int gap = static_cast<int>(p.a1.size()) - static_cast<int>(p.b1.size());
    std::vector<int> x14, y24;
    if (static_cast<int>(x13.size() + y23.size()) >= gap) {
        // arbitrary subsets with |X| + |Y| exactly the gap; canonical order
        int take_x = std::min<int>(gap, static_cast<int>(x13.size()));
        x14.assign(x13.begin(), x13.begin() + take_x);
        y24.assign(y23.begin(), y23.begin() + (gap - take_x));
    } else {
        x14 = x13;
        y24 = y23;
    }

    std::set<int> drop_a(x14.begin(), x14.end()), drop_b(y24.begin(), y24.end());
    PartitionPair out;
    for (int v : p.a1) (drop_a.count(v) ? out.a2 : out.a1).push_back(v);
    out.a2.insert(out.a2.end(), p.a2.begin(), p.a2.end());
    out.b1 = p.b1;
    for (int v : p.b2) (drop_b.count(v) ? out.b1 : out.b2).push_back(v);
    for (auto* part : {&out.a1, &out.a2, &out.b1, &out.b2}) std::sort(part->begin(), part->end());

    auto report = check_superextremal(g, out, params.nu1, params.nu2);
    if (!report.ok())
        throw Error(ErrorKind::RefinementFailed,
                    "Q" + std::to_string(report.first_violated()) + " (" +
                        report.q[report.first_violated() - 1].note +
                        "): input not extremal enough for these constants");
    return out;
}

}  // namespace rainbow

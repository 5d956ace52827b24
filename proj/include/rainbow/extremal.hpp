#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rainbow/generate.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/matching.hpp"
#include "rainbow/params.hpp"
#include "rainbow/sampler.hpp"
#include "rainbow/structure.hpp"
#include "rainbow/util.hpp"

namespace rainbow {

/// Multiset of colors with multiplicities.
struct ColorMultiset {
    std::map<Color, int> counts;
    int total = 0;

    void add(Color c, int mult = 1) {
        if (mult <= 0) throw Error(ErrorKind::InvalidInput, "multiplicity must be positive");
        counts[c] += mult;
        total += mult;
    }
    int multiplicity(Color c) const {
        auto it = counts.find(c);
        return it == counts.end() ? 0 : it->second;
    }
    static ColorMultiset from_list(const std::vector<Color>& colors) {
        ColorMultiset m;
        for (Color c : colors) m.add(c);
        return m;
    }
};

/// Keep the full multiplicity of colors present in the set b.
inline ColorMultiset multiset_intersect_plus(const ColorMultiset& a, const std::set<Color>& b) {
    ColorMultiset out;
    for (const auto& [c, m] : a.counts)
        if (b.count(c)) out.add(c, m);
    return out;
}

/// Drop colors present in b entirely; a == (a cap+ b) + (a minus+ b).
inline ColorMultiset multiset_minus_plus(const ColorMultiset& a, const std::set<Color>& b) {
    ColorMultiset out;
    for (const auto& [c, m] : a.counts)
        if (!b.count(c)) out.add(c, m);
    return out;
}

/// Dyadic decomposition of a multiset by multiplicity: level j holds colors
/// with multiplicity in [2^-j * muN, 2^-(j-1) * muN] (boundary values go to
/// the smaller j), colors at or below m_star form the light part.
struct DyadicProfile {
    int levels = 0;     // s
    double mu_n = 0;    // top of the heavy range
    double m_star = 0;  // heavy/light split
    std::vector<std::vector<Color>> support;  // S^j per level (distinct colors)
    std::vector<int> level_mass;              // p^j, multiplicity mass per level
    int heavy_mass = 0;                       // p
    int light_mass = 0;                       // q
    std::vector<Color> light_support;
};

inline DyadicProfile make_dyadic_profile(const ColorMultiset& c, double mu_n, double m_star,
                                         int levels) {
    if (levels < 1) throw Error(ErrorKind::InvalidInput, "levels must be >= 1");
    DyadicProfile d;
    d.levels = levels;
    d.mu_n = mu_n;
    d.m_star = m_star;
    d.support.resize(levels);
    d.level_mass.assign(levels, 0);
    for (const auto& [color, mult] : c.counts) {
        if (approx_le(mult, m_star)) {
            d.light_mass += mult;
            d.light_support.push_back(color);
            continue;
        }
        int j = mult >= mu_n ? 1
                             : static_cast<int>(std::ceil(std::log2(mu_n / mult) - kThresholdGuard));
        j = std::clamp(j, 1, levels);
        d.support[j - 1].push_back(color);
        d.level_mass[j - 1] += mult;
        d.heavy_mass += mult;
    }
    return d;
}

/// Subset selection result. colors is the returned T; the margin is
/// min_i (eta*|C_i| - |C_i cap+ T|), nonnegative exactly when the deletion
/// bound holds for every multiset.
struct ColorSelection {
    std::vector<Color> colors;
    int retries = 0;
    double worst_t2_margin = std::numeric_limits<double>::infinity();
    bool b1_ok = true;      // nu*N <= |C_i| <= N for all i
    bool b2_ok = true;      // total multiplicity of every color <= mu*N
    bool u_size_ok = true;  // |U| == ceil(alpha*ell)
    bool trivial_branch = false;
};

namespace detail {

inline double t2_margin(const std::vector<ColorMultiset>& c, const std::set<Color>& t,
                        double eta) {
    double margin = std::numeric_limits<double>::infinity();
    for (const ColorMultiset& ci : c) {
        int hit = 0;
        for (Color color : t) hit += ci.multiplicity(color);
        margin = std::min(margin, eta * ci.total - hit);
    }
    return margin;
}

}  // namespace detail

/// Select T inside U with |T| >= ell such that no multiset loses more than an
/// eta fraction of its mass when T's colors are deleted. Both guarantees are
/// hard postconditions: sampling failures are absorbed by retries, and
/// RetriesExhausted reports the worst margin seen.
inline ColorSelection select_color_subset(const std::vector<ColorMultiset>& c,
                                          const std::vector<Color>& u_in, int ell,
                                          const ParamSet& params, std::uint64_t seed) {
    params.validate();
    if (ell < 0) throw Error(ErrorKind::InvalidInput, "ell must be >= 0");
    const int big_n = static_cast<int>(c.size());
    if (big_n == 0) throw Error(ErrorKind::InvalidInput, "no multisets");
    const double mu_n = params.mu * big_n;
    ColorSelection out;

    std::vector<Color> u = [&] {
        std::vector<Color> v(u_in.begin(), u_in.end());
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }();

    // hypothesis validation: violations are reported, the run continues
    for (const ColorMultiset& ci : c)
        if (!approx_ge(ci.total, params.nu * big_n) || ci.total > big_n) out.b1_ok = false;
    {
        std::map<Color, long long> global;
        for (const ColorMultiset& ci : c)
            for (const auto& [color, mult] : ci.counts) global[color] += mult;
        for (const auto& [color, mult] : global)
            if (!approx_le(static_cast<double>(mult), mu_n)) out.b2_ok = false;
    }
    out.u_size_ok =
        static_cast<int>(u.size()) == ceil_threshold(params.alpha * std::max(ell, 0));

    std::mt19937_64 rng = make_rng(seed);
    const double eta = params.eta;
    double worst_seen = std::numeric_limits<double>::infinity();

    auto try_return = [&](std::set<Color> t) -> bool {
        if (static_cast<int>(t.size()) < ell) return false;
        double margin = detail::t2_margin(c, t, eta);
        worst_seen = std::min(worst_seen, margin);
        if (!approx_ge(margin, 0)) return false;
        out.colors.assign(t.begin(), t.end());
        out.worst_t2_margin = margin;
        return true;
    };

    if (ell <= 2 * params.alpha + kThresholdGuard) {
        // small targets: an arbitrary ell-subset of U (resampled until the
        // deletion bound checks out)
        out.trivial_branch = true;
        std::vector<Color> pool = u;
        for (out.retries = 0; out.retries < params.retry_cap; ++out.retries) {
            std::shuffle(pool.begin(), pool.end(), rng);
            if (static_cast<int>(pool.size()) < ell)
                throw Error(ErrorKind::NotEnoughColors, "|U| < ell");
            if (try_return(std::set<Color>(pool.begin(), pool.begin() + ell))) return out;
        }
        throw Error(ErrorKind::RetriesExhausted,
                    "worst deletion margin " + std::to_string(worst_seen));
    }

    // dyadic machinery: delta-sample T0, then strip activated dense levels of
    // susceptible multisets
    const double delta = std::min(3.0 / params.alpha, 1.0);
    const double m_star =
        (params.epsilon / (10 * params.alpha * params.alpha)) * big_n / std::log2(big_n);
    const int levels =
        std::max(1, static_cast<int>(std::ceil(std::log2(std::max(2.0, mu_n / m_star)))));
    const double dense_base = 1.0 / std::sqrt(params.mu);

    std::vector<DyadicProfile> profiles;
    profiles.reserve(c.size());
    std::set<Color> u_set(u.begin(), u.end());
    std::vector<char> susceptible(c.size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        profiles.push_back(make_dyadic_profile(c[i], mu_n, m_star, levels));
        int hit = multiset_intersect_plus(c[i], u_set).total;
        susceptible[i] = approx_ge(hit, eta * c[i].total) ? 1 : 0;
    }

    std::bernoulli_distribution include(delta);
    for (out.retries = 0; out.retries < params.retry_cap; ++out.retries) {
        std::set<Color> t0;
        for (Color color : u)
            if (include(rng)) t0.insert(color);
        std::set<Color> t = t0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!susceptible[i]) continue;
            for (int j = 1; j <= levels; ++j) {
                const auto& support = profiles[i].support[j - 1];
                int s_ij = static_cast<int>(support.size());
                if (s_ij == 0) continue;
                if (!approx_ge(s_ij, std::pow(2.0, (j - 1) / 2.0) * dense_base))
                    continue;  // not dense enough to matter
                int in_t0 = 0;
                for (Color color : support) in_t0 += t0.count(color);
                if (approx_ge(in_t0, 2 * delta * s_ij))
                    for (Color color : support) t.erase(color);
            }
        }
        if (try_return(std::move(t))) return out;
    }
    throw Error(ErrorKind::RetriesExhausted,
                "worst deletion margin " + std::to_string(worst_seen));
}

/// Greedy rainbow matching inside E(A1,B2): repeatedly take the first
/// surviving edge, then delete everything incident to it or sharing its
/// color. Runs for exactly ell/(10*nu3) steps unless overridden.
inline Matching greedy_cross_matching(const ColoredBipartiteGraph& g, const PartitionPair& p,
                                      const ParamSet& params,
                                      std::optional<int> i_star_override = std::nullopt) {
    const int n = g.n_per_side();
    p.validate(n);
    const int ell = p.ell();
    if (ell < 0) throw Error(ErrorKind::InvalidInput, "partition has |A1| < |B1|");
    const int i_star =
        i_star_override ? *i_star_override : floor_threshold(ell / (10 * params.nu3));

    Matching m(n);
    if (i_star == 0) return m;

    detail::PartMasks masks(g, p);
    std::vector<Edge> pool;
    for (const Edge& e : g.edges())
        if (masks.a1[e.a] && !masks.b1[e.b]) pool.push_back(e);  // E(A1, B2)

    for (int step = 1; step <= i_star; ++step) {
        if (pool.empty())
            throw Error(ErrorKind::PoolExhausted,
                        "step " + std::to_string(step) + " of " + std::to_string(i_star));
        Edge pick = pool.front();
        m.set(pick.a, pick.b);
        std::erase_if(pool, [&](const Edge& e) {
            return e.a == pick.a || e.b == pick.b || e.color == pick.color;
        });
    }
    return m;
}

/// The graph left after removing a cross matching's vertices and colors.
struct ResidualGraph {
    ColoredBipartiteGraph host;  // re-indexed to n_h per side
    PartitionPair partition;     // in the new indexing
    int n_h = 0;
    std::set<Color> removed_colors;
    std::vector<int> a_old_of_new, b_old_of_new;
    std::vector<int> a_new_of_old, b_new_of_old;  // -1 for removed vertices
};

struct ResidualReport {
    // slacks; >= 0 means the residual degrees stayed in regime
    double r1 = 0;  // near-half part degrees, exception budget (A side)
    double r2 = 0;  // part degree floor (A side)
    double r3 = 0;  // near-half part degrees, exception budget (B side)
    double r4 = 0;  // part degree floor (B side)
    bool r5 = true; // |A1^H| == |B1^H| and |A2^H| == |B2^H|
};

struct ResidualBuild {
    Matching m_star;  // in the original indexing
    ResidualGraph h;
    ResidualReport report;
};

/// M* = the first ell edges of m_sel whose colors lie in t; H = g minus V(M*)
/// minus every edge colored like M*. The part sizes rebalance exactly when M*
/// lives in E(A1,B2).
inline ResidualBuild build_residual(const ColoredBipartiteGraph& g, const PartitionPair& p,
                                    const Matching& m_sel, const std::vector<Color>& t,
                                    const ParamSet& params) {
    const int n = g.n_per_side();
    p.validate(n);
    const int ell = p.ell();
    if (ell < 0) throw Error(ErrorKind::InvalidInput, "partition has |A1| < |B1|");
    std::set<Color> t_set(t.begin(), t.end());

    ResidualBuild out;
    out.m_star = Matching(n);
    std::vector<char> drop_a(n, 0), drop_b(n, 0);
    for (auto [a, b] : m_sel.pairs()) {
        if (out.m_star.size() == ell) break;
        if (t_set.count(g.color_of(a, b))) {
            out.m_star.set(a, b);
            drop_a[a] = 1;
            drop_b[b] = 1;
            out.h.removed_colors.insert(g.color_of(a, b));
        }
    }
    if (out.m_star.size() != ell)
        throw Error(ErrorKind::NotEnoughColors, "selected colors cover only " +
                                                    std::to_string(out.m_star.size()) +
                                                    " matching edges, need " + std::to_string(ell));

    ResidualGraph& h = out.h;
    h.n_h = n - ell;
    h.a_new_of_old.assign(n, -1);
    h.b_new_of_old.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        if (!drop_a[v]) {
            h.a_new_of_old[v] = static_cast<int>(h.a_old_of_new.size());
            h.a_old_of_new.push_back(v);
        }
        if (!drop_b[v]) {
            h.b_new_of_old[v] = static_cast<int>(h.b_old_of_new.size());
            h.b_old_of_new.push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        if (drop_a[e.a] || drop_b[e.b]) continue;
        if (h.removed_colors.count(e.color)) continue;
        edges.push_back({h.a_new_of_old[e.a], h.b_new_of_old[e.b], e.color});
    }
    h.host = build_graph(h.n_h, edges);
    for (int v : p.a1)
        if (h.a_new_of_old[v] != -1) h.partition.a1.push_back(h.a_new_of_old[v]);
    for (int v : p.a2)
        if (h.a_new_of_old[v] != -1) h.partition.a2.push_back(h.a_new_of_old[v]);
    for (int v : p.b1)
        if (h.b_new_of_old[v] != -1) h.partition.b1.push_back(h.b_new_of_old[v]);
    for (int v : p.b2)
        if (h.b_new_of_old[v] != -1) h.partition.b2.push_back(h.b_new_of_old[v]);
    for (auto* part : {&h.partition.a1, &h.partition.a2, &h.partition.b1, &h.partition.b2})
        std::sort(part->begin(), part->end());

    ResidualReport& rep = out.report;
    rep.r5 = h.partition.a1.size() == h.partition.b1.size() &&
             h.partition.a2.size() == h.partition.b2.size();

    detail::PartMasks masks(h.host, h.partition);
    const double near_half = (1 - params.eta) * h.n_h / 2.0;
    auto survey = [&](const std::vector<int>& part, bool a_side, bool into_first) {
        int violators = 0, min_deg = h.n_h;
        for (int v : part) {
            int d = a_side ? detail::deg_a_into(h.host, masks, v, into_first)
                           : detail::deg_b_into(h.host, masks, v, into_first);
            min_deg = std::min(min_deg, d);
            if (!approx_ge(d, near_half)) ++violators;
        }
        return std::pair<int, int>{violators, part.empty() ? h.n_h : min_deg};
    };
    auto [va1, ma1] = survey(h.partition.a1, true, true);
    auto [va2, ma2] = survey(h.partition.a2, true, false);
    auto [vb1, mb1] = survey(h.partition.b1, false, true);
    auto [vb2, mb2] = survey(h.partition.b2, false, false);
    rep.r1 = params.nu1 * n - std::max(va1, va2);
    rep.r2 = std::min(ma1, ma2) - params.nu2 * h.n_h;
    rep.r3 = params.nu1 * n - std::max(vb1, vb2);
    rep.r4 = std::min(mb1, mb2) - params.nu2 * h.n_h;
    return out;
}

struct CoreResult {
    ColoredBipartiteGraph core;  // part-respecting high-degree edges of H
    bool moon_moser_1 = false;   // diagnostic certificates per component
    bool moon_moser_2 = false;
    Matching pm;
    std::size_t kept_edges = 0;
};

/// Keep the part-respecting edges whose endpoints are not both low-degree:
/// max(e_H(a,B_i), e_H(b,A_i)) >= (1-eta) * n_H / 2. The two components are
/// checked against the Moon-Moser condition (diagnostic only) and a perfect
/// matching is produced directly.
inline CoreResult build_core(const ResidualGraph& h, double eta) {
    if (h.partition.a1.size() != h.partition.b1.size() ||
        h.partition.a2.size() != h.partition.b2.size())
        throw Error(ErrorKind::InvalidInput, "residual parts are unbalanced");
    detail::PartMasks masks(h.host, h.partition);
    const double threshold = (1 - eta) * h.n_h / 2.0;
    std::vector<Edge> kept;
    for (const Edge& e : h.host.edges()) {
        bool a_first = masks.a1[e.a], b_first = masks.b1[e.b];
        if (a_first != b_first) continue;  // cross-part edges never enter the core
        int da = detail::deg_a_into(h.host, masks, e.a, a_first);
        int db = detail::deg_b_into(h.host, masks, e.b, a_first);
        if (approx_ge(std::max(da, db), threshold)) kept.push_back(e);
    }
    CoreResult out;
    out.kept_edges = kept.size();
    out.core = build_graph(std::max(h.n_h, 1), kept);

    auto component_mm = [&](const std::vector<int>& as, const std::vector<int>& bs) {
        detail::PartMasks core_masks(out.core, h.partition);
        std::vector<int> da, db;
        bool first = !as.empty() && masks.a1[as.front()];
        for (int v : as) da.push_back(detail::deg_a_into(out.core, core_masks, v, first));
        for (int v : bs) db.push_back(detail::deg_b_into(out.core, core_masks, v, first));
        return as.empty() || moon_moser_degrees(da, db);
    };
    out.moon_moser_1 = component_mm(h.partition.a1, h.partition.b1);
    out.moon_moser_2 = component_mm(h.partition.a2, h.partition.b2);

    auto pm = find_perfect_matching(out.core);
    if (!pm)
        throw Error(ErrorKind::NoPerfectMatching,
                    "core subgraph has no perfect matching; constants out of regime");
    out.pm = *pm;
    return out;
}

struct StageMetric {
    std::string key;
    double value;
};

struct PipelineResult {
    std::optional<Matching> matching;  // in the input graph's indexing
    Matching m_star;
    std::string failed_stage;  // empty on success
    std::string detail;
    std::vector<StageMetric> trace;

    bool ok() const { return matching.has_value(); }
};

/// Full extremal-case pipeline: greedy cross matching, color-subset selection,
/// residual graph, core subgraph, then the conflict-free search on the core.
/// Success output is verified perfect, rainbow, and contains the cross
/// matching inside E(A1,B2).
inline PipelineResult extremal_rainbow_pm(const ColoredBipartiteGraph& g, const PartitionPair& p,
                                          const ParamSet& params) {
    const int n = g.n_per_side();
    PipelineResult out;
    auto fail = [&](const std::string& stage, const std::string& why) {
        out.failed_stage = stage;
        out.detail = why;
        return out;
    };
    auto metric = [&](std::string key, double value) {
        out.trace.push_back({std::move(key), value});
    };

    auto pre = check_superextremal(g, p, params.nu1, params.nu2);
    if (!pre.ok())
        return fail("precondition",
                    "partition is not superextremal: Q" + std::to_string(pre.first_violated()));
    const int ell = pre.ell;
    metric("ell", ell);
    metric("n", n);

    Matching m_sel(n);
    try {
        m_sel = greedy_cross_matching(g, p, params);
    } catch (const Error& e) {
        return fail("greedy-cross-matching", e.what());
    }
    const int i_star = m_sel.size();
    metric("greedy.size", i_star);

    std::vector<Color> u;
    for (auto [a, b] : m_sel.pairs()) u.push_back(g.color_of(a, b));
    std::sort(u.begin(), u.end());

    ColorSelection selection;
    if (ell > 0) {
        std::vector<ColorMultiset> c;
        c.reserve(2 * static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            ColorMultiset cv;
            for (int b : g.neighbors_of_a(v)) cv.add(g.color_of(v, b));
            c.push_back(std::move(cv));
        }
        for (int v = 0; v < n; ++v) {
            ColorMultiset cv;
            for (int a : g.neighbors_of_b(v)) cv.add(g.color_of(a, v));
            c.push_back(std::move(cv));
        }
        ParamSet selection_params = params;
        selection_params.nu = params.nu3 / 2;
        selection_params.eta = params.eta / 2;
        selection_params.alpha = static_cast<double>(i_star) / ell;
        try {
            selection = select_color_subset(c, u, ell, selection_params, mix_seed(params.seed, 0xb0c5));
        } catch (const Error& e) {
            return fail("color-subset", e.what());
        }
        metric("color_subset.retries", selection.retries);
        metric("color_subset.t2_margin", selection.worst_t2_margin);
        metric("color_subset.trivial_branch", selection.trivial_branch ? 1 : 0);
    }

    ResidualBuild residual;
    try {
        residual = build_residual(g, p, m_sel, selection.colors, params);
    } catch (const Error& e) {
        return fail("residual", e.what());
    }
    out.m_star = residual.m_star;
    metric("residual.n_h", residual.h.n_h);
    metric("residual.r1", residual.report.r1);
    metric("residual.r2", residual.report.r2);
    metric("residual.r3", residual.report.r3);
    metric("residual.r4", residual.report.r4);
    if (!residual.report.r5) return fail("residual", "part sizes did not rebalance");

    CoreResult core;
    try {
        core = build_core(residual.h, params.eta);
    } catch (const Error& e) {
        return fail("core", e.what());
    }
    metric("core.edges", static_cast<double>(core.kept_edges));
    metric("core.moon_moser_1", core.moon_moser_1 ? 1 : 0);
    metric("core.moon_moser_2", core.moon_moser_2 ? 1 : 0);

    auto search =
        find_conflict_free_pm(core.core, conflicts_from_coloring(core.core), params);
    metric("search.restarts", search.restarts);
    metric("search.switches", static_cast<double>(search.switches));
    if (search.outcome != SearchReport::Outcome::Found)
        return fail("matching-search", to_string(search.outcome));

    std::vector<std::pair<int, int>> pairs = residual.m_star.pairs();
    for (auto [a, b] : search.matching->pairs())
        pairs.push_back({residual.h.a_old_of_new[a], residual.h.b_old_of_new[b]});
    Matching combined = Matching::from_pairs(g, pairs);

    // verification; failures here are bugs, never silent returns
    detail::PartMasks masks(g, p);
    if (!combined.perfect()) throw Error(ErrorKind::VerificationFailed, "result not perfect");
    if (!is_rainbow(g, combined)) throw Error(ErrorKind::VerificationFailed, "result not rainbow");
    for (auto [a, b] : residual.m_star.pairs())
        if (!masks.a1[a] || masks.b1[b])
            throw Error(ErrorKind::VerificationFailed, "cross matching left E(A1,B2)");
    out.matching = std::move(combined);
    return out;
}

/// Planted superextremal instance: two dense blocks, a regular cross pattern
/// from A1 to B2 with all-distinct colors, block colors in classes of size at
/// most color_bound. Passes check_superextremal at the default nu1/nu2.
struct SuperextremalInstance {
    ColoredBipartiteGraph graph;
    PartitionPair partition;
};

inline SuperextremalInstance make_superextremal_instance(int n, int ell, int color_bound,
                                                         std::uint64_t seed) {
    if (n < 8 || n % 2 != 0) throw Error(ErrorKind::InvalidInput, "n must be even and >= 8");
    if (ell < 2 || ell % 2 != 0 || ell > n / 2 - 2)
        throw Error(ErrorKind::InvalidInput, "ell must be even, 2 <= ell <= n/2 - 2");
    if (color_bound < 1) throw Error(ErrorKind::InvalidInput, "color_bound must be >= 1");
    const int h = (n - ell) / 2;
    const int big = h + ell;  // |A1| = |B2|
    SuperextremalInstance out;
    for (int v = 0; v < big; ++v) out.partition.a1.push_back(v);
    for (int v = big; v < n; ++v) out.partition.a2.push_back(v);
    for (int v = 0; v < h; ++v) out.partition.b1.push_back(v);
    for (int v = h; v < n; ++v) out.partition.b2.push_back(v);

    std::mt19937_64 rng = make_rng(seed);
    const int d_c = ell / 2;
    std::vector<int> relabel(big);
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);

    std::vector<Edge> edges;
    int color = 0;
    for (int i = 0; i < big; ++i)  // regular cross pattern, distinct colors
        for (int k = 0; k < d_c; ++k)
            edges.push_back({i, h + relabel[(i + k) % big], color++});
    const int cross_colors = color;

    std::vector<Edge> block;
    for (int a = 0; a < big; ++a)
        for (int b = 0; b < h; ++b) block.push_back({a, b, 0});  // A1 x B1
    for (int a = big; a < n; ++a)
        for (int b = h; b < n; ++b) block.push_back({a, b, 0});  // A2 x B2
    detail::assign_colors(block, color_bound, rng, cross_colors);
    edges.insert(edges.end(), block.begin(), block.end());
    out.graph = build_graph(n, edges);
    return out;
}

}  // namespace rainbow

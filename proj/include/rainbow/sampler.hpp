#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/matching.hpp"
#include "rainbow/oracle.hpp"
#include "rainbow/params.hpp"
#include "rainbow/util.hpp"

namespace rainbow {

/// Switch-chain settings. Pure 6-cycle switching preserves the permutation
/// sign of the A->B map and is therefore not irreducible; the default mixes in
/// 4-cycle exchanges, which is what makes the chain connect all perfect
/// matchings on complete graphs.
struct ChainConfig {
    std::vector<int> cycle_lengths = {4, 6};
    int steps = 0;  // sampling stride; 0 = n * ceil(log2(n+1))
    double laziness = 0.5;
    std::uint64_t seed = 0;
    bool independent = false;  // fresh chain per sample instead of one continued chain

    void validate() const {
        if (cycle_lengths.empty())
            throw Error(ErrorKind::InvalidInput, "cycle_lengths must be non-empty");
        for (int c : cycle_lengths)
            if (c != 4 && c != 6)
                throw Error(ErrorKind::InvalidInput, "cycle lengths are 4 and 6 only");
        if (laziness < 0 || laziness >= 1)
            throw Error(ErrorKind::InvalidInput, "laziness must be in [0,1)");
        if (steps < 0) throw Error(ErrorKind::InvalidInput, "steps must be >= 0");
    }

    int stride_for(int n) const {
        if (steps > 0) return steps;
        int lg = 1;
        while ((1 << lg) < n + 1) ++lg;
        return std::max(1, n * lg);
    }
};

/// Perfect matching sampled by a randomized augmenting order; nullopt iff the
/// graph has none. Deterministic per seed.
inline std::optional<Matching> random_perfect_matching(const ColoredBipartiteGraph& g,
                                                       std::uint64_t seed) {
    const int n = g.n_per_side();
    std::mt19937_64 rng = make_rng(seed);
    std::vector<std::vector<int>> adj(n);
    for (int a = 0; a < n; ++a) {
        adj[a] = g.neighbors_of_a(a);
        std::shuffle(adj[a].begin(), adj[a].end(), rng);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> match_a(n, -1), match_b(n, -1), stamp(n, -1);
    int round = 0;
    std::function<bool(int)> augment = [&](int a) -> bool {
        for (int b : adj[a]) {
            if (stamp[b] == round) continue;
            stamp[b] = round;
            if (match_b[b] == -1 || augment(match_b[b])) {
                match_a[a] = b;
                match_b[b] = a;
                return true;
            }
        }
        return false;
    };
    int matched = 0;
    for (int a : order) {
        ++round;
        if (augment(a)) ++matched;
    }
    if (matched != n) return std::nullopt;
    Matching m(n);
    for (int a = 0; a < n; ++a) m.set(a, match_a[a]);
    return m;
}

/// One lazy step of the switch chain. A uniformly random candidate move of a
/// uniformly chosen allowed cycle length is applied when valid; otherwise the
/// state is unchanged. The proposal is symmetric, so the stationary
/// distribution is uniform on each connected component.
inline Matching chain_step(const ColoredBipartiteGraph& g, const Matching& m,
                           const ChainConfig& cfg, std::mt19937_64& rng) {
    if (!m.perfect()) throw Error(ErrorKind::InvalidInput, "chain states must be perfect");
    const int n = g.n_per_side();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < cfg.laziness) return m;

    std::uniform_int_distribution<std::size_t> pick_len(0, cfg.cycle_lengths.size() - 1);
    int len = cfg.cycle_lengths[pick_len(rng)];
    std::uniform_int_distribution<int> pick_a(0, n - 1);

    if (len == 4) {
        int i = pick_a(rng);
        std::uniform_int_distribution<int> pick_other(0, n - 2);
        int j = pick_other(rng);
        if (j >= i) ++j;
        auto swapped = try_four_swap(g, m, i, j);
        return swapped ? *swapped : m;
    }

    // 6-cycle: propose (x in M, y an arbitrary graph edge); both the leaving
    // and entering candidate sets have graph-independent sizes, which keeps
    // the proposal symmetric across states
    const auto& edges = g.edges();
    if (edges.empty()) return m;
    std::uniform_int_distribution<std::size_t> pick_edge(0, edges.size() - 1);
    int a1 = pick_a(rng);
    int b1 = m.b_of(a1);
    const Edge& y = edges[pick_edge(rng)];
    if (y.a == a1 || y.b == b1 || m.contains(y.a, y.b)) return m;
    SwitchMove mv;
    mv.a1 = a1;
    mv.b1 = b1;
    mv.a = y.a;
    mv.b = y.b;
    mv.partner_of_b = m.a_of(y.b);
    mv.partner_of_a = m.b_of(y.a);
    if (!g.has_edge(mv.partner_of_b, b1) || !g.has_edge(a1, mv.partner_of_a)) return m;
    return apply_switch(g, m, mv);
}

/// Samples taken every stride steps after burn-in, from one continued chain or
/// from independent chains; reproducible per cfg.seed.
inline std::vector<Matching> sample_matchings(const ColoredBipartiteGraph& g,
                                              const ChainConfig& cfg, int count, int burn_in) {
    cfg.validate();
    if (count < 0 || burn_in < 0) throw Error(ErrorKind::InvalidInput, "negative count/burn-in");
    auto start = random_perfect_matching(g, cfg.seed);
    if (!start) throw Error(ErrorKind::NoPerfectMatching, "graph has no perfect matching");
    const int stride = cfg.stride_for(g.n_per_side());
    std::vector<Matching> out;
    out.reserve(count);
    if (cfg.independent) {
        for (int s = 0; s < count; ++s) {
            std::mt19937_64 rng = make_rng(cfg.seed, 1 + s);
            Matching m = *random_perfect_matching(g, mix_seed(cfg.seed, 0x5eed + s));
            for (int i = 0; i < burn_in; ++i) m = chain_step(g, m, cfg, rng);
            out.push_back(m);
        }
    } else {
        std::mt19937_64 rng = make_rng(cfg.seed, 1);
        Matching m = *start;
        for (int i = 0; i < burn_in; ++i) m = chain_step(g, m, cfg, rng);
        for (int s = 0; s < count; ++s) {
            for (int i = 0; i < stride; ++i) m = chain_step(g, m, cfg, rng);
            out.push_back(m);
        }
    }
    return out;
}

enum class SearchStrategy { Auto, RestartOnly, Repair, ExactOnly };

struct SearchReport {
    enum class Outcome { Found, Exhausted, ProvedNone };
    Outcome outcome = Outcome::Exhausted;
    std::optional<Matching> matching;
    int restarts = 0;
    std::uint64_t switches = 0;
    int conflicts_repaired = 0;
    double seconds = 0.0;
    bool exact_ran = false;
};

inline const char* to_string(SearchReport::Outcome o) {
    switch (o) {
        case SearchReport::Outcome::Found: return "found";
        case SearchReport::Outcome::Exhausted: return "exhausted";
        case SearchReport::Outcome::ProvedNone: return "proved-none";
    }
    return "?";
}

namespace detail {

inline int count_violations(const Matching& m, const ConflictSystem& f) {
    int v = 0;
    for (const auto& pr : f.pairs())
        if (m.contains(pr.first.first, pr.first.second) &&
            m.contains(pr.second.first, pr.second.second))
            ++v;
    return v;
}

/// One repair switch on some member of a violated pair. Candidates whose
/// incoming cycle edges introduce no conflict are preferred, then lower
/// violation count, then a uniform random choice.
inline bool repair_step(const ColoredBipartiteGraph& g, Matching& m, const ConflictSystem& f,
                        std::mt19937_64& rng, std::uint64_t& switches, int& repaired) {
    std::vector<std::pair<EdgeRef, EdgeRef>> violated;
    for (const auto& pr : f.pairs())
        if (m.contains(pr.first.first, pr.first.second) &&
            m.contains(pr.second.first, pr.second.second))
            violated.push_back(pr);
    if (violated.empty()) return false;
    const int before = static_cast<int>(violated.size());

    std::uniform_int_distribution<std::size_t> pick_pair(0, violated.size() - 1);
    auto pair = violated[pick_pair(rng)];
    EdgeRef x = (rng() & 1) ? pair.first : pair.second;

    auto consider = [&](EdgeRef xx) -> std::optional<Matching> {
        auto candidates = switchable_edges(g, m, xx);
        if (candidates.empty()) return std::nullopt;
        struct Scored {
            Matching next;
            bool clean;
            int violations;
        };
        std::vector<Scored> scored;
        scored.reserve(candidates.size());
        for (const Edge& y : candidates) {
            SwitchMove mv = make_switch_move(g, m, xx, {y.a, y.b});
            Matching next = apply_switch(g, m, mv);
            // incoming edges: y and the two cross edges
            EdgeRef in1{mv.a, mv.b}, in2{mv.partner_of_b, mv.b1}, in3{mv.a1, mv.partner_of_a};
            bool clean = true;
            for (EdgeRef e : {in1, in2, in3}) {
                for (const EdgeRef& p : f.partners(e.first, e.second))
                    if (next.contains(p.first, p.second)) {
                        clean = false;
                        break;
                    }
                if (!clean) break;
            }
            int violations = count_violations(next, f);
            scored.push_back({std::move(next), clean, violations});
        }
        bool any_clean = std::any_of(scored.begin(), scored.end(),
                                     [](const Scored& s) { return s.clean; });
        int best = std::numeric_limits<int>::max();
        for (const Scored& s : scored)
            if (!any_clean || s.clean) best = std::min(best, s.violations);
        std::vector<const Scored*> ties;
        for (const Scored& s : scored)
            if ((!any_clean || s.clean) && s.violations == best) ties.push_back(&s);
        std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
        return ties[pick(rng)]->next;
    };

    auto next = consider(x);
    if (!next) next = consider(x == pair.first ? pair.second : pair.first);
    if (!next) return false;  // stuck; caller restarts
    m = std::move(*next);
    ++switches;
    int after = count_violations(m, f);
    repaired += std::max(0, before - after);
    return true;
}

}  // namespace detail

/// Restart sampling, then switch-based repair, then an exhaustive fallback on
/// small graphs. Found results are re-verified before return; ProvedNone is
/// only emitted after a complete exact search (or when no perfect matching
/// exists at all).
inline SearchReport find_conflict_free_pm(const ColoredBipartiteGraph& g, const ConflictSystem& f,
                                          const ParamSet& params,
                                          SearchStrategy strategy = SearchStrategy::Auto,
                                          int jobs = 1) {
    params.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SearchReport report;
    auto finish = [&](SearchReport r) {
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.outcome == SearchReport::Outcome::Found) {
            if (!r.matching || !r.matching->perfect() || !is_conflict_free(*r.matching, f))
                throw Error(ErrorKind::VerificationFailed, "search returned an invalid matching");
        }
        return r;
    };

    const int n = g.n_per_side();
    if (!find_perfect_matching(g)) {
        // Hall fails: no perfect matching of any kind; maximum matching is an
        // exact, complete procedure
        report.outcome = SearchReport::Outcome::ProvedNone;
        report.exact_ran = true;
        return finish(report);
    }

    const double budget_hint = std::exp(std::sqrt(params.mu) * n);
    const int restarts =
        std::max(1, std::min<int>(params.restart_budget,
                                  budget_hint > 1e9 ? params.restart_budget
                                                    : static_cast<int>(std::ceil(budget_hint))));
    const int repair_starts = std::max(1, std::min(restarts, 8));
    const int repair_budget = params.chain_steps > 0 ? params.chain_steps : 50 * n;

    if (strategy != SearchStrategy::ExactOnly) {
        std::atomic<bool> found{false};
        std::mutex result_mutex;
        std::optional<Matching> result;
        std::atomic<int> restart_count{0};
        std::atomic<std::uint64_t> switch_count{0};
        std::atomic<int> repaired_count{0};

        auto worker = [&](int worker_id, int stride) {
            // phase 1: pure restarts
            for (int r = worker_id; r < restarts && !found.load(); r += stride) {
                auto m = random_perfect_matching(g, mix_seed(params.seed, r));
                restart_count.fetch_add(1);
                if (m && is_conflict_free(*m, f)) {
                    std::lock_guard<std::mutex> lock(result_mutex);
                    if (!result) result = *m;
                    found.store(true);
                    return;
                }
            }
            if (strategy == SearchStrategy::RestartOnly) return;
            // phase 2: repair loops from fresh starts
            std::mt19937_64 rng = make_rng(params.seed, 0xbeef + worker_id);
            for (int r = worker_id; r < repair_starts && !found.load(); r += stride) {
                auto m = random_perfect_matching(g, mix_seed(params.seed, 0xabc0 + r));
                if (!m) return;
                restart_count.fetch_add(1);
                std::uint64_t sw = 0;
                int rep = 0;
                for (int step = 0; step < repair_budget && !found.load(); ++step) {
                    if (is_conflict_free(*m, f)) break;
                    if (!detail::repair_step(g, *m, f, rng, sw, rep)) break;
                }
                switch_count.fetch_add(sw);
                repaired_count.fetch_add(rep);
                if (is_conflict_free(*m, f)) {
                    std::lock_guard<std::mutex> lock(result_mutex);
                    if (!result) result = *m;
                    found.store(true);
                    return;
                }
            }
        };

        if (jobs <= 1) {
            worker(0, 1);
        } else {
            std::vector<std::thread> threads;
            for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w, jobs);
            for (auto& t : threads) t.join();
        }
        report.restarts = restart_count.load();
        report.switches = switch_count.load();
        report.conflicts_repaired = repaired_count.load();
        if (result) {
            report.outcome = SearchReport::Outcome::Found;
            report.matching = std::move(result);
            return finish(report);
        }
    }

    // phase 3: exhaustive decision on small instances
    if (strategy == SearchStrategy::ExactOnly || strategy == SearchStrategy::Auto) {
        if (n <= params.exact_threshold) {
            report.exact_ran = true;
            auto exact = oracle::exists_conflict_free_pm(g, f);
            switch (exact.kind) {
                case oracle::ExistenceResult::Kind::Yes:
                    report.outcome = SearchReport::Outcome::Found;
                    report.matching = exact.witness;
                    return finish(report);
                case oracle::ExistenceResult::Kind::No:
                    report.outcome = SearchReport::Outcome::ProvedNone;
                    return finish(report);
                case oracle::ExistenceResult::Kind::Unknown:
                    report.exact_ran = false;
                    break;
            }
        }
    }
    report.outcome = SearchReport::Outcome::Exhausted;
    return finish(report);
}

}  // namespace rainbow

#pragma once

#include <optional>
#include <string>

#include "rainbow/extremal.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/sampler.hpp"
#include "rainbow/structure.hpp"

namespace rainbow {

struct SolveOptions {
    SearchStrategy strategy = SearchStrategy::Auto;
    int jobs = 1;
};

struct SolveOutcome {
    SearchReport report;
    std::optional<Classification> classification;
    std::optional<PipelineResult> pipeline;  // populated on the extremal route
    std::string route;                       // expander | extremal | extremal-fallback | direct
    bool dirac = true;
};

/// End-to-end search: classify a Dirac input and route robust expanders to the
/// restart/repair/exact search and extremal graphs through the structured
/// pipeline. The pipeline is color-specific, so explicit conflict systems (and
/// any pipeline stage failure, which proves nothing) fall back to the direct
/// search; the final verdict always comes from a search or exact stage.
inline SolveOutcome solve_rainbow(const ColoredBipartiteGraph& g,
                                  const std::optional<ConflictSystem>& explicit_conflicts,
                                  const ParamSet& params, const SolveOptions& opts = {}) {
    params.validate();
    SolveOutcome out;
    const ConflictSystem conflicts =
        explicit_conflicts ? *explicit_conflicts : conflicts_from_coloring(g);

    auto direct = [&](const char* route) {
        out.route = route;
        out.report = find_conflict_free_pm(g, conflicts, params, opts.strategy, opts.jobs);
        return out;
    };

    if (opts.strategy == SearchStrategy::ExactOnly) return direct("direct");
    out.dirac = is_dirac(g);
    if (!out.dirac) return direct("direct");

    out.classification = classify(g, params);
    if (out.classification->verdict == Classification::Verdict::RobustExpander)
        return direct("expander");
    if (explicit_conflicts) return direct("direct");

    try {
        PartitionPair refined =
            refine_to_superextremal(g, *out.classification->partition, params);
        out.pipeline = extremal_rainbow_pm(g, refined, params);
    } catch (const Error&) {
        out.pipeline.reset();  // refinement failed; nothing was proven
    }
    if (out.pipeline && out.pipeline->ok()) {
        out.route = "extremal";
        out.report.outcome = SearchReport::Outcome::Found;
        out.report.matching = out.pipeline->matching;
        if (!is_rainbow(g, *out.report.matching))
            throw Error(ErrorKind::VerificationFailed, "pipeline result not rainbow");
        return out;
    }
    // a stage failure is not a nonexistence proof
    auto result = direct("extremal-fallback");
    return result;
}

}  // namespace rainbow

// Command-line surface: generation, classification, solving, verification,
// sampling diagnostics, and the factor/embedding reductions. JSON in, JSON
// out; all randomness flows from --seed. Exit codes: 0 success/found,
// 1 legitimate negative, 2 usage/validation error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rainbow/extremal.hpp"
#include "rainbow/generate.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/json_io.hpp"
#include "rainbow/oracle.hpp"
#include "rainbow/reductions.hpp"
#include "rainbow/sampler.hpp"
#include "rainbow/solve.hpp"
#include "rainbow/structure.hpp"

using namespace rainbow;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string params_file;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    bool trace = false;
    bool pretty = false;
    int exact_threshold = -1;
    int budget = -1;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--params", c.params_file, "parameter JSON file (partial overrides ok)");
    cmd->add_option("--seed", c.seed, "seed for all randomness")->each([&](const std::string&) {
        c.seed_set = true;
    });
    cmd->add_option("--jobs", c.jobs, "parallel workers for restart search")->check(CLI::Range(1, 256));
    cmd->add_flag("--trace", c.trace, "emit per-stage trace in the result JSON");
    cmd->add_flag("--pretty", c.pretty, "indent JSON output");
    cmd->add_option("--exact-threshold", c.exact_threshold,
                    "max side size for the exhaustive fallback");
    cmd->add_option("--budget", c.budget, "restart budget cap");
    cmd->add_option("-o,--out", c.out_path, "write the artifact to a file instead of stdout");
}

ParamSet load_params(const CommonOpts& c) {
    ParamSet p;
    if (!c.params_file.empty()) p = params_from_json(load_json_file(c.params_file));
    if (c.seed_set) p.seed = c.seed;
    if (c.exact_threshold >= 0) p.exact_threshold = c.exact_threshold;
    if (c.budget > 0) p.restart_budget = c.budget;
    p.validate();
    return p;
}

void write_artifact(const CommonOpts& c, const json& j) {
    std::string text = c.pretty ? j.dump(2) : j.dump();
    if (c.out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(c.out_path);
        if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + c.out_path);
        out << text << "\n";
    }
}

struct ManifestClock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

/// Every run emits a manifest on stderr: command, full parameters, input
/// digest, outcome, timing. Identical manifests imply identical outputs.
void emit_manifest(const std::string& command, const ParamSet& params,
                   const std::string& input_digest, const std::string& outcome,
                   const ManifestClock& clock) {
    json m = {{"command", command},
              {"params", params_to_json(params)},
              {"seed", params.seed},
              {"input_digest", input_digest},
              {"outcome", outcome},
              {"timings", {{"seconds", clock.seconds()}}}};
    std::cerr << m.dump() << "\n";
}

std::string digest_of_file(const std::string& path) {
    if (path.empty()) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(read_file_bytes(path))));
    return buf;
}

int cmd_gen(const std::string& kind, int n, int bound, int t, const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    ColoredBipartiteGraph g;
    json extra;
    if (kind == "random-dirac") {
        g = random_dirac_instance(n, bound, params, params.seed);
    } else if (kind == "knn") {
        g = make_knn(n);
    } else if (kind == "counterexample") {
        auto cx = counterexample(t);
        g = cx.graph;
        extra = {{"t", t},
                 {"m", cx.meta.m},
                 {"block", cx.meta.block},
                 {"a1_size", cx.meta.a1_size},
                 {"b1_size", cx.meta.b1_size},
                 {"cross_needed", cx.meta.cross_needed},
                 {"cross_rainbow_max", cx.meta.cross_rainbow_max},
                 {"color_bound", cx.meta.color_bound}};
    } else {
        throw Error(ErrorKind::InvalidInput, "unknown kind " + kind);
    }
    write_artifact(opts, graph_to_json(g));
    json outcome = {{"n", g.n_per_side()},
                    {"edges", g.edges().size()},
                    {"dirac", is_dirac(g)},
                    {"coloring_bound", coloring_bound(g)}};
    if (!extra.is_null()) outcome["construction"] = extra;
    emit_manifest("gen " + kind, params, "-", outcome.dump(), clock);
    return 0;
}

int cmd_classify(const std::string& graph_path, const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    auto g = graph_from_json(load_json_file(graph_path));
    auto c = classify(g, params);
    write_artifact(opts, classification_to_json(c));
    emit_manifest("classify", params, digest_of_file(graph_path),
                  c.verdict == Classification::Verdict::RobustExpander ? "expander" : "extremal",
                  clock);
    return 0;
}

int cmd_solve(const std::string& graph_path, const std::string& conflicts_path,
              const std::string& strategy_name, const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    auto g = graph_from_json(load_json_file(graph_path));
    std::optional<ConflictSystem> conflicts;
    if (!conflicts_path.empty())
        conflicts = conflicts_from_json(load_json_file(conflicts_path));

    SolveOptions sopts;
    sopts.jobs = opts.jobs;
    if (strategy_name == "auto")
        sopts.strategy = SearchStrategy::Auto;
    else if (strategy_name == "restart")
        sopts.strategy = SearchStrategy::RestartOnly;
    else if (strategy_name == "repair")
        sopts.strategy = SearchStrategy::Repair;
    else if (strategy_name == "exact")
        sopts.strategy = SearchStrategy::ExactOnly;
    else
        throw Error(ErrorKind::InvalidInput, "unknown strategy " + strategy_name);

    auto outcome = solve_rainbow(g, conflicts, params, sopts);
    json result = {{"outcome", to_string(outcome.report.outcome)},
                   {"route", outcome.route},
                   {"dirac", outcome.dirac},
                   {"restarts", outcome.report.restarts},
                   {"switches", outcome.report.switches},
                   {"conflicts_repaired", outcome.report.conflicts_repaired},
                   {"exact_ran", outcome.report.exact_ran},
                   {"seconds", outcome.report.seconds}};
    if (outcome.classification)
        result["classification"] = classification_to_json(*outcome.classification);
    if (outcome.report.matching) result["matching"] = matching_to_json(*outcome.report.matching);
    if (opts.trace && outcome.pipeline) {
        json tr = json::object();
        for (const auto& m : outcome.pipeline->trace) tr[m.key] = m.value;
        if (!outcome.pipeline->ok()) {
            tr["failed_stage"] = outcome.pipeline->failed_stage;
            tr["detail"] = outcome.pipeline->detail;
        }
        result["pipeline"] = tr;
    }
    if (!opts.out_path.empty() && outcome.report.matching) {
        // artifact file gets the bare matching; the full report goes to stdout
        std::ofstream out(opts.out_path);
        if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + opts.out_path);
        out << matching_to_json(*outcome.report.matching).dump() << "\n";
        std::cout << (opts.pretty ? result.dump(2) : result.dump()) << "\n";
    } else {
        CommonOpts stdout_only = opts;
        stdout_only.out_path.clear();
        write_artifact(stdout_only, result);
    }
    emit_manifest("solve", params, digest_of_file(graph_path), to_string(outcome.report.outcome),
                  clock);
    return outcome.report.outcome == SearchReport::Outcome::Found ? 0 : 1;
}

int cmd_sample(const std::string& graph_path, const std::string& cycles, int samples, int burn_in,
               int stride, double lazy, const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    auto g = graph_from_json(load_json_file(graph_path));

    ChainConfig cfg;
    cfg.cycle_lengths.clear();
    for (char ch : cycles)
        if (ch == '4' || ch == '6') cfg.cycle_lengths.push_back(ch - '0');
    cfg.steps = stride;
    cfg.laziness = lazy;
    cfg.seed = params.seed;
    cfg.validate();
    if (burn_in < 0) burn_in = 20 * cfg.stride_for(g.n_per_side());  // scale with n log n

    auto sampled = sample_matchings(g, cfg, samples, burn_in);
    std::map<Matching, int> freq;
    for (const auto& m : sampled) ++freq[m];

    json frequencies = json::array();
    std::set<int> signs_observed;
    for (const auto& [m, count] : freq) {
        frequencies.push_back({{"matching", matching_to_json(m)},
                               {"count", count},
                               {"freq", static_cast<double>(count) / samples}});
        signs_observed.insert(m.permutation_sign());
    }
    json result = {{"samples", samples},
                   {"distinct", freq.size()},
                   {"cycle_lengths", cfg.cycle_lengths},
                   {"signs_observed", std::vector<int>(signs_observed.begin(), signs_observed.end())},
                   {"frequencies", frequencies}};

    // when full enumeration is cheap, report coverage and the chi-square
    // statistic against the uniform target
    auto all = oracle::enumerate_perfect_matchings(g, 20000);
    if (!all.truncated) {
        result["exact_total"] = all.total_count;
        result["coverage"] = static_cast<double>(freq.size()) / all.total_count;
        double chi = 0;
        double expect = static_cast<double>(samples) / all.total_count;
        for (const auto& m : all.matchings) {
            auto it = freq.find(m);
            double observed = it == freq.end() ? 0.0 : it->second;
            chi += (observed - expect) * (observed - expect) / expect;
        }
        result["chi_square"] = chi;
        std::set<int> all_signs;
        for (const auto& m : all.matchings) all_signs.insert(m.permutation_sign());
        result["sign_classes_total"] = all_signs.size();
        result["sign_class_unreachable"] = signs_observed.size() < all_signs.size();
    }
    write_artifact(opts, result);
    emit_manifest("sample", params, digest_of_file(graph_path),
                  "distinct=" + std::to_string(freq.size()), clock);
    return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& matching_path,
               const std::string& conflicts_path, const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    auto g = graph_from_json(load_json_file(graph_path));
    auto m = matching_from_json(g, load_json_file(matching_path));
    json result = {{"size", m.size()}, {"perfect", m.perfect()}};
    bool ok = m.perfect();
    result["rainbow"] = is_rainbow(g, m);
    if (!conflicts_path.empty()) {
        auto f = conflicts_from_json(load_json_file(conflicts_path));
        result["conflict_free"] = is_conflict_free(m, f);
        ok = ok && is_conflict_free(m, f);
    } else {
        ok = ok && is_rainbow(g, m);
    }
    write_artifact(opts, result);
    emit_manifest("verify", params, digest_of_file(graph_path), ok ? "ok" : "reject", clock);
    return ok ? 0 : 1;
}

int cmd_factor(const std::string& graph_path, int delta, const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    auto host = simple_graph_from_json(load_json_file(graph_path));
    auto bw = delta_factor_blowup(host, delta);
    if (!bw.host_dirac) std::cerr << "warning: host graph is not Dirac\n";

    SolveOptions sopts;
    sopts.jobs = opts.jobs;
    auto outcome = solve_rainbow(bw.q, std::nullopt, params, sopts);
    if (outcome.report.outcome != SearchReport::Outcome::Found) {
        emit_manifest("factor", params, digest_of_file(graph_path),
                      to_string(outcome.report.outcome), clock);
        return 1;
    }
    auto fr = extract_factor(host, bw.q, bw.map, *outcome.report.matching);
    if (!fr.input_rainbow || !fr.simple)
        throw Error(ErrorKind::VerificationFailed, "extracted factor is not simple/rainbow");
    for (int v = 0; v < fr.h.n_vertices(); ++v)
        if (fr.h.degree(v) != delta)
            throw Error(ErrorKind::VerificationFailed, "factor is not regular");
    write_artifact(opts, simple_graph_to_json(fr.h));
    emit_manifest("factor", params, digest_of_file(graph_path), "found", clock);
    return 0;
}

int cmd_embed(const std::string& graph_path, const std::string& template_path,
              const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    EmbeddingInstance inst;
    inst.host = simple_graph_from_json(load_json_file(graph_path));
    json tj = load_json_file(template_path);
    inst.side_a = tj.at("a_side").get<std::vector<int>>();
    inst.side_b = tj.at("b_side").get<std::vector<int>>();
    for (const auto& e : tj.at("j_edges"))
        inst.j_edges.push_back({e[0].get<int>(), e[1].get<int>()});

    auto aux = embedding_auxiliary(inst);
    auto search = find_conflict_free_pm(aux.q, aux.f_q, params, SearchStrategy::Auto, opts.jobs);
    if (search.outcome != SearchReport::Outcome::Found) {
        emit_manifest("embed", params, digest_of_file(graph_path), to_string(search.outcome),
                      clock);
        return 1;
    }
    auto result = extract_embedding(inst, aux, *search.matching);
    json out = {{"f", result.f},
                {"r", simple_graph_to_json(result.r)},
                {"conflict_bound", aux.f_q.bound()},
                {"q_min_degree", aux.q.min_degree()}};
    write_artifact(opts, out);
    emit_manifest("embed", params, digest_of_file(graph_path), "found", clock);
    return 0;
}

int cmd_bench(const std::string& graph_path, int repeat, int chain_steps,
              const CommonOpts& opts) {
    ManifestClock clock;
    ParamSet params = load_params(opts);
    auto g = graph_from_json(load_json_file(graph_path));

    auto time_of = [](auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    double mm_seconds = time_of([&] { (void)find_perfect_matching(g); });

    int found = 0;
    double total = 0, tmin = 1e99, tmax = 0;
    for (int r = 0; r < repeat; ++r) {
        ParamSet run = params;
        run.seed = mix_seed(params.seed, r);
        double secs = time_of([&] {
            auto out = solve_rainbow(g, std::nullopt, run, {SearchStrategy::Auto, opts.jobs});
            if (out.report.outcome == SearchReport::Outcome::Found) ++found;
        });
        total += secs;
        tmin = std::min(tmin, secs);
        tmax = std::max(tmax, secs);
    }

    ChainConfig cfg;
    cfg.seed = params.seed;
    double chain_seconds = 0;
    if (auto start = random_perfect_matching(g, params.seed)) {
        std::mt19937_64 rng = make_rng(params.seed, 2);
        Matching m = *start;
        chain_seconds = time_of([&] {
            for (int i = 0; i < chain_steps; ++i) m = chain_step(g, m, cfg, rng);
        });
    }

    json result = {
        {"n", g.n_per_side()},
        {"edges", g.edges().size()},
        {"maximum_matching_seconds", mm_seconds},
        {"solve",
         {{"runs", repeat},
          {"found", found},
          {"seconds_mean", repeat > 0 ? total / repeat : 0.0},
          {"seconds_min", repeat > 0 ? tmin : 0.0},
          {"seconds_max", repeat > 0 ? tmax : 0.0}}},
        {"chain",
         {{"steps", chain_steps},
          {"seconds", chain_seconds},
          {"steps_per_second", chain_seconds > 0 ? chain_steps / chain_seconds : 0.0}}}};
    write_artifact(opts, result);
    emit_manifest("bench", params, digest_of_file(graph_path),
                  "solved " + std::to_string(found) + "/" + std::to_string(repeat), clock);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rainbow perfect matchings in Dirac bipartite graphs"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph instance");
    std::string gen_kind;
    int gen_n = 6, gen_bound = 2, gen_t = 1;
    CommonOpts gen_opts;
    gen->add_option("kind", gen_kind, "random-dirac | counterexample | knn")->required();
    gen->add_option("--n", gen_n, "side size");
    gen->add_option("--bound", gen_bound, "max color class size");
    gen->add_option("--t", gen_t, "counterexample parameter");
    add_common(gen, gen_opts);

    // classify
    auto* cls = app.add_subcommand("classify", "robust expander vs extremal");
    std::string cls_graph;
    CommonOpts cls_opts;
    cls->add_option("graph", cls_graph, "graph JSON file")->required();
    add_common(cls, cls_opts);

    // solve
    auto* solve = app.add_subcommand("solve", "find a conflict-free perfect matching");
    std::string solve_graph, solve_conflicts, solve_strategy = "auto";
    CommonOpts solve_opts;
    solve->add_option("graph", solve_graph, "graph JSON file")->required();
    solve->add_option("--conflicts", solve_conflicts, "explicit conflict system JSON");
    solve->add_option("--strategy", solve_strategy, "auto | restart | repair | exact");
    add_common(solve, solve_opts);

    // sample
    auto* sample = app.add_subcommand("sample", "switch-chain sampling diagnostics");
    std::string sample_graph, sample_cycles = "4,6";
    int sample_count = 10000, sample_burn = -1, sample_stride = 0;
    double sample_lazy = 0.5;
    CommonOpts sample_opts;
    sample->add_option("graph", sample_graph, "graph JSON file")->required();
    sample->add_option("--cycles", sample_cycles, "cycle lengths, e.g. 4,6 or 6");
    sample->add_option("--samples", sample_count, "number of samples");
    sample->add_option("--burn-in", sample_burn, "burn-in steps (default scales with n log n)");
    sample->add_option("--stride", sample_stride, "steps between samples (0 = auto)");
    sample->add_option("--lazy", sample_lazy, "laziness probability");
    add_common(sample, sample_opts);

    // verify
    auto* verify = app.add_subcommand("verify", "check a matching file against a graph");
    std::string verify_graph, verify_matching, verify_conflicts;
    CommonOpts verify_opts;
    verify->add_option("graph", verify_graph, "graph JSON file")->required();
    verify->add_option("matching", verify_matching, "matching JSON file")->required();
    verify->add_option("--conflicts", verify_conflicts, "explicit conflict system JSON");
    add_common(verify, verify_opts);

    // factor
    auto* factor = app.add_subcommand("factor", "rainbow regular factor via the blow-up");
    std::string factor_graph;
    int factor_delta = 2;
    CommonOpts factor_opts;
    factor->add_option("graph", factor_graph, "simple graph JSON file")->required();
    factor->add_option("--delta", factor_delta, "factor degree (even)")->required();
    add_common(factor, factor_opts);

    // bench
    auto* bench = app.add_subcommand("bench", "time the search and sampling kernels");
    std::string bench_graph;
    int bench_repeat = 10, bench_steps = 100000;
    CommonOpts bench_opts;
    bench->add_option("graph", bench_graph, "graph JSON file")->required();
    bench->add_option("--repeat", bench_repeat, "solve runs (distinct derived seeds)");
    bench->add_option("--chain-steps", bench_steps, "chain steps to time");
    add_common(bench, bench_opts);

    // embed
    auto* embed = app.add_subcommand("embed", "rainbow copy of a bipartite template");
    std::string embed_graph, embed_template;
    CommonOpts embed_opts;
    embed->add_option("graph", embed_graph, "simple graph JSON file")->required();
    embed->add_option("--template", embed_template, "template JSON: a_side, b_side, j_edges")
        ->required();
    add_common(embed, embed_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors are exit 2
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_kind, gen_n, gen_bound, gen_t, gen_opts);
        if (cls->parsed()) return cmd_classify(cls_graph, cls_opts);
        if (solve->parsed())
            return cmd_solve(solve_graph, solve_conflicts, solve_strategy, solve_opts);
        if (sample->parsed())
            return cmd_sample(sample_graph, sample_cycles, sample_count, sample_burn,
                              sample_stride, sample_lazy, sample_opts);
        if (verify->parsed())
            return cmd_verify(verify_graph, verify_matching, verify_conflicts, verify_opts);
        if (factor->parsed()) return cmd_factor(factor_graph, factor_delta, factor_opts);
        if (bench->parsed())
            return cmd_bench(bench_graph, bench_repeat, bench_steps, bench_opts);
        if (embed->parsed()) return cmd_embed(embed_graph, embed_template, embed_opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

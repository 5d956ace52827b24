#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rainbow/extremal.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/matching.hpp"
#include "rainbow/params.hpp"
#include "rainbow/reductions.hpp"
#include "rainbow/structure.hpp"

// JSON wire formats. Graphs: {"n": int, "edges": [[a,b,color],...]};
// matchings: [[a,b],...] sorted by a; conflict systems:
// {"pairs": [[[a1,b1],[a2,b2]],...]}. Colors are non-negative integers.
namespace rainbow {

using nlohmann::json;

inline json graph_to_json(const ColoredBipartiteGraph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.a, e.b, e.color});
    return {{"n", g.n_per_side()}, {"edges", edges}};
}

inline ColoredBipartiteGraph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw Error(ErrorKind::InvalidInput, "graph JSON needs {\"n\":..., \"edges\":[...]}");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw Error(ErrorKind::InvalidInput, "edge entries are [a, b, color]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<Color>()});
    }
    return build_graph(j.at("n").get<int>(), edges);
}

inline json simple_graph_to_json(const SimpleGraph& g) {
    json edges = json::array();
    for (const SimpleEdge& e : g.edges()) edges.push_back({e.u, e.v, e.color});
    return {{"n", g.n_vertices()}, {"edges", edges}};
}

inline SimpleGraph simple_graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw Error(ErrorKind::InvalidInput, "graph JSON needs {\"n\":..., \"edges\":[...]}");
    std::vector<SimpleEdge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw Error(ErrorKind::InvalidInput, "edge entries are [u, v, color]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<Color>()});
    }
    return SimpleGraph(j.at("n").get<int>(), edges);
}

inline json matching_to_json(const Matching& m) {
    json out = json::array();
    for (auto [a, b] : m.pairs()) out.push_back({a, b});
    return out;
}

inline Matching matching_from_json(const ColoredBipartiteGraph& g, const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "matching JSON is [[a,b],...]");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2)
            throw Error(ErrorKind::InvalidInput, "matching entries are [a, b]");
        pairs.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    return Matching::from_pairs(g, pairs);
}

inline json conflicts_to_json(const ConflictSystem& f) {
    json pairs = json::array();
    for (const auto& pr : f.pairs())
        pairs.push_back({{pr.first.first, pr.first.second}, {pr.second.first, pr.second.second}});
    return {{"pairs", pairs}};
}

inline ConflictSystem conflicts_from_json(const json& j) {
    if (!j.is_object() || !j.contains("pairs"))
        throw Error(ErrorKind::InvalidInput, "conflict JSON needs {\"pairs\": [...]}" );
    std::vector<std::pair<EdgeRef, EdgeRef>> pairs;
    for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_array() || p[0].size() != 2 ||
            !p[1].is_array() || p[1].size() != 2)
            throw Error(ErrorKind::InvalidInput, "conflict entries are [[a,b],[a,b]]");
        pairs.push_back({{p[0][0].get<int>(), p[0][1].get<int>()},
                         {p[1][0].get<int>(), p[1][1].get<int>()}});
    }
    return ConflictSystem::from_pairs(std::move(pairs));
}

inline json params_to_json(const ParamSet& p) {
    return {{"mu", p.mu},
            {"gamma", p.gamma},
            {"nu", p.nu},
            {"tau", p.tau},
            {"epsilon", p.epsilon},
            {"nu1", p.nu1},
            {"nu2", p.nu2},
            {"nu3", p.nu3},
            {"nu4", p.nu4},
            {"eta", p.eta},
            {"alpha", p.alpha},
            {"restart_budget", p.restart_budget},
            {"chain_steps", p.chain_steps},
            {"retry_cap", p.retry_cap},
            {"seed", p.seed},
            {"exact_threshold", p.exact_threshold},
            {"expander_exact_max_n", p.expander_exact_max_n}};
}

/// Reads any subset of the fields over the defaults.
inline ParamSet params_from_json(const json& j, ParamSet base = {}) {
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("mu", base.mu);
    get("gamma", base.gamma);
    get("nu", base.nu);
    get("tau", base.tau);
    get("epsilon", base.epsilon);
    get("nu1", base.nu1);
    get("nu2", base.nu2);
    get("nu3", base.nu3);
    get("nu4", base.nu4);
    get("eta", base.eta);
    get("alpha", base.alpha);
    get("restart_budget", base.restart_budget);
    get("chain_steps", base.chain_steps);
    get("retry_cap", base.retry_cap);
    get("seed", base.seed);
    get("exact_threshold", base.exact_threshold);
    get("expander_exact_max_n", base.expander_exact_max_n);
    base.validate();
    return base;
}

inline json partition_to_json(const PartitionPair& p) {
    return {{"a1", p.a1}, {"a2", p.a2}, {"b1", p.b1}, {"b2", p.b2}};
}

inline PartitionPair partition_from_json(const json& j) {
    PartitionPair p;
    p.a1 = j.at("a1").get<std::vector<int>>();
    p.a2 = j.at("a2").get<std::vector<int>>();
    p.b1 = j.at("b1").get<std::vector<int>>();
    p.b2 = j.at("b2").get<std::vector<int>>();
    return p;
}

inline json classification_to_json(const Classification& c) {
    json out;
    out["verdict"] =
        c.verdict == Classification::Verdict::RobustExpander ? "expander" : "extremal";
    out["nu"] = c.nu;
    out["tau"] = c.tau;
    out["sets_checked"] = c.sets_checked;
    out["certified"] = c.certified;
    out["warning"] = c.warning;
    if (c.verdict == Classification::Verdict::Extremal) {
        out["epsilon"] = c.epsilon;
        out["partition"] = partition_to_json(*c.partition);
    }
    if (c.witness) {
        out["witness"] = c.witness->x;
        out["witness_side"] = to_string(c.witness->side);
    }
    return out;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
    }
    return j;
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace rainbow
